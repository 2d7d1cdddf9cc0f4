#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chor/parser.hpp"
#include "chor/syntax.hpp"

namespace chor {

struct VarState {
  Value val;
  std::set<ProcessName> perms;
  auto operator<=>(const VarState&) const = default;
};

// One process's store: variables with values and usage permissions.
struct Store {
  std::map<Variable, VarState> vars;
  auto operator<=>(const Store&) const = default;
};

using StoreFamily = std::map<ProcessName, Store>;

// FIFO buffer with optional capacity (nullopt = unbounded).
struct ChannelState {
  std::vector<Value> buf;
  std::optional<std::uint64_t> cap;
  bool hasSpace() const { return !cap || buf.size() < *cap; }
  auto operator<=>(const ChannelState&) const = default;
};

using ChannelFamily = std::map<ChannelName, ChannelState>;

// Either one global program or a family of local programs, one per process.
struct ProgramFamily {
  bool local = false;
  ProgPtr global;                                       // !local
  std::vector<std::pair<ProcessName, ProgPtr>> locals;  // local, sorted by name
};

struct SystemState {
  ProgramFamily progs;
  StoreFamily stores;
  ChannelFamily chans;
};

enum class PermMode { Checked, Free };

// Evaluates E against S on behalf of `reader`. nullopt when undefined:
// missing variable, missing permission (Checked mode), or a type error.
std::optional<Value> readExpr(const Store& s, const ProcessName& reader, const ExprPtr& e,
                              PermMode mode);

// Writes v to y on behalf of `writer`; acq narrows permissions to {writer},
// rel restores `allProcs`, other values leave permissions untouched. Writing
// to the sink always succeeds and changes nothing. Returns false when blocked.
bool writeVal(Store& s, const ProcessName& writer, const Variable& y, const Value& v,
              const std::set<ProcessName>& allProcs);

struct ProgStep {
  Action act;
  ProgPtr next;
};

// Program-level reduction: all enabled (action, successor) pairs, including
// out-of-order steps past an unrelated sequential prefix.
std::vector<ProgStep> programSteps(const ProgPtr& p);

struct FamilyStep {
  Action act;
  ProgramFamily next;
};

std::vector<FamilyStep> familySteps(const ProgramFamily& f);

struct SystemStep {
  GroundAction ground;
  bool changed = false;  // some store value changed (permissions ignored)
  SystemState next;
};

struct SystemContext {
  std::set<ProcessName> procs;
};

std::vector<SystemStep> systemSteps(const SystemState& st, const SystemContext& ctx);

// Whether any program-level step exists (used to distinguish deadlock from
// proper termination: dead = program can step, system cannot).
bool programCanStep(const SystemState& st);

// Builds the initial system state for a parsed file: full permissions on every
// declared variable, empty channels between every ordered pair of processes.
// local=true starts from the per-process projections of main.
SystemState initialState(const ChoreographyFile& file, bool local);
SystemContext contextOf(const ChoreographyFile& file);

// Canonical serialization; equal states serialize equally and vice versa.
std::string serializeState(const SystemState& st);

}  // namespace chor
