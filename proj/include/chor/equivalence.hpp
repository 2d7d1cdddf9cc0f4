#pragma once

#include <string>
#include <vector>

#include "chor/statespace.hpp"

namespace chor {

struct BisimResult {
  bool equivalent = false;
  // On inequivalence: a label sequence one side can exhibit (up to branching)
  // that the other cannot match. Empty when equivalent.
  std::vector<std::string> trace;
};

// Branching bisimilarity of the initial states, by signature-based partition
// refinement over the disjoint union. Silent steps are the edges flagged
// silent (tau labels).
BisimResult branchingBisimilar(const Lts& a, const Lts& b);

// Quotient modulo branching bisimilarity: one state per reachable equivalence
// class, inert silent edges dropped, parallel edges deduplicated.
Lts quotientLts(const Lts& a);

// Pure interleaving product (no synchronization); used to compose per-role
// LTSs, where every cross-role ordering is allowed.
Lts interleaveLts(const Lts& a, const Lts& b);

// Decides the global program against its projection family. The local family
// never synchronizes at the program level, so its LTS is the interleaving of
// the per-role LTSs; each role is quotiented first to keep the product small.
BisimResult checkOperationalEquivalence(const ProgPtr& g,
                                        const std::vector<ProcessName>& procs,
                                        const ExploreOptions& opts = {});

}  // namespace chor
