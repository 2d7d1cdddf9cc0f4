#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chor/semantics.hpp"

namespace chor {

struct LtsEdge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::string label;
  bool silent = false;   // tau
  bool changed = false;  // a store value changed along this edge
  bool write = false;    // the edge writes wProc.wVar (assign or receive)
  ProcessName wProc;
  Variable wVar;
};

// State 0 is initial; states are numbered by remaining action count (highest
// first, BFS order breaking ties), which is topological for this loop-free
// language: every edge satisfies src < dst.
struct Lts {
  std::size_t numStates = 0;
  std::vector<LtsEdge> edges;
  std::vector<std::uint8_t> canStep;  // program-level steps exist
  std::vector<std::uint8_t> dead;     // canStep but no system successor
  std::vector<SystemState> states;    // populated when keepStates is set
};

struct ExploreOptions {
  std::size_t limit = 1'000'000;
  bool keepStates = true;
};

Lts exploreSystem(const SystemState& init, const SystemContext& ctx,
                  const ExploreOptions& opts = {});

Lts exploreProgramFamily(const ProgramFamily& init, const ExploreOptions& opts = {});

std::string exportAut(const Lts& l);
std::string exportDot(const Lts& l);
std::string exportJson(const Lts& l);

}  // namespace chor
