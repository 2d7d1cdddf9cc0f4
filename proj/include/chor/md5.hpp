#pragma once

#include <string>
#include <string_view>

namespace chor {

// Lowercase 32-hex-digit MD5 digest of the UTF-8 bytes of `data`.
std::string md5Hex(std::string_view data);

}  // namespace chor
