#pragma once

#include <map>

#include "chor/syntax.hpp"

namespace chor {

// Restricts a global program to the actions whose subject is p; every other
// action becomes tau, so the projection is a homomorphism on the program
// structure and the local shape mirrors the global one.
ProgPtr project(const ProgPtr& g, const ProcessName& p);

std::map<ProcessName, ProgPtr> projectAll(const ProgPtr& g,
                                          const std::vector<ProcessName>& procs);

}  // namespace chor
