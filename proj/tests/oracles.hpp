#pragma once

// Independent re-implementations used only to cross-check the main library:
// deliberately naive, favoring obviousness over speed.

#include <random>
#include <string>

#include "chor/checker.hpp"
#include "chor/equivalence.hpp"
#include "chor/parser.hpp"

namespace chor::oracle {

struct Counts {
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t dead = 0;
};

// Depth-first enumeration of the system reduction relation.
Counts dfsExploreSystem(const SystemState& init, const SystemContext& ctx);

// Largest branching bisimulation by delete-violators over the full relation.
bool naiveBranchingBisim(const Lts& a, const Lts& b);

// State formula (no temporal operators) evaluated at one state.
bool stateHolds(const Lts& l, std::size_t s, const FormulaPtr& f);

// AG as a plain reachability scan; AU as a recursive all-maximal-paths check.
bool agOracle(const Lts& l, const FormulaPtr& body);
bool auOracle(const Lts& l, const FormulaPtr& f1, const FormulaPtr& f2);

ProgPtr randomProgram(std::mt19937& rng, int maxActions = 12, int maxProcs = 3);
ProgPtr insertRandomTau(const ProgPtr& p, std::mt19937& rng);

// Drops tau leaves, normalizing units away (test-only helper).
ProgPtr eraseTau(const ProgPtr& p);

std::string slurpFile(const std::string& path);
ChoreographyFile loadCorpus(const std::string& name);  // name without extension

}  // namespace chor::oracle
