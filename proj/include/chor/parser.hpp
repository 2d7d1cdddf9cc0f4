#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chor/syntax.hpp"

namespace chor {

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct ParseError : ChorError {
  ParseError(const std::string& msg, SourcePos pos)
      : ChorError(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + msg),
        pos(pos) {}
  SourcePos pos;
};

// A parsed .chor file: shorthands expanded, defs inlined into main.
struct ChoreographyFile {
  std::vector<ProcessName> processes;
  std::map<ProcessName, std::vector<std::pair<Variable, Value>>> stores;
  std::optional<std::uint64_t> defaultCapacity;  // nullopt = unbounded
  std::map<ChannelName, std::uint64_t> capacityOverrides;
  std::vector<std::pair<std::string, ProgPtr>> defs;
  ProgPtr main;

  bool isDeclared(const ProcessName& p) const;
  // (process, variable) pairs read or written by main but not initialized.
  std::vector<std::pair<ProcessName, Variable>> uninitializedUses() const;
};

ChoreographyFile parseChoreography(std::string_view text);

// Concrete program syntax; parse(render(P)) == P structurally.
std::string renderProgram(const ProgPtr& p);

// Parses a program in isolation (used by tests and round-trip checks).
ProgPtr parseProgramText(std::string_view text);

// Parses a bare expression (shared with property-file atoms).
ExprPtr parseExpressionText(std::string_view text);

}  // namespace chor
