#include "chor/equivalence.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "chor/projection.hpp"

namespace chor {

namespace {

struct UnionEdge {
  std::uint32_t src, dst;
  std::string label;
  bool silent;
};

using Sig = std::set<std::pair<std::string, int>>;

struct Refined {
  std::vector<int> block;  // per union state
  std::vector<Sig> sig;    // final signatures
  int numBlocks = 0;
};

// Signature refinement for branching bisimilarity. The inputs are DAGs, so
// each pass computes exact signatures in one reverse-topological sweep: an
// inert silent edge contributes its target's whole signature (stuttering),
// every other edge contributes (label, target block).
Refined refine(std::size_t n, const std::vector<std::vector<UnionEdge>>& out) {
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& e : out[s]) ++indeg[e.dst];
  std::vector<std::uint32_t> topo;
  topo.reserve(n);
  for (std::size_t s = 0; s < n; ++s)
    if (indeg[s] == 0) topo.push_back(static_cast<std::uint32_t>(s));
  for (std::size_t i = 0; i < topo.size(); ++i)
    for (const auto& e : out[topo[i]])
      if (--indeg[e.dst] == 0) topo.push_back(e.dst);
  if (topo.size() != n) throw ChorError("internal error: cyclic LTS in refinement");

  Refined r;
  r.block.assign(n, 0);
  r.numBlocks = 1;
  for (;;) {
    r.sig.assign(n, {});
    for (std::size_t i = n; i-- > 0;) {
      std::uint32_t s = topo[i];
      for (const auto& e : out[s]) {
        if (e.silent && r.block[e.dst] == r.block[e.src]) {
          r.sig[s].insert(r.sig[e.dst].begin(), r.sig[e.dst].end());
        } else {
          r.sig[s].insert({e.label, r.block[e.dst]});
        }
      }
    }
    std::map<std::pair<int, Sig>, int> ids;
    std::vector<int> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      auto key = std::make_pair(r.block[s], r.sig[s]);
      auto it = ids.find(key);
      if (it == ids.end()) it = ids.emplace(key, static_cast<int>(ids.size())).first;
      next[s] = it->second;
    }
    if (static_cast<int>(ids.size()) == r.numBlocks) return r;
    r.numBlocks = static_cast<int>(ids.size());
    r.block = std::move(next);
  }
}

std::vector<std::vector<UnionEdge>> unionAdjacency(const Lts& a, const Lts& b,
                                                   std::size_t& n) {
  n = a.numStates + b.numStates;
  std::vector<std::vector<UnionEdge>> out(n);
  for (const auto& e : a.edges) out[e.src].push_back({e.src, e.dst, e.label, e.silent});
  for (const auto& e : b.edges) {
    auto off = static_cast<std::uint32_t>(a.numStates);
    out[e.src + off].push_back({e.src + off, e.dst + off, e.label, e.silent});
  }
  return out;
}

// Walks from `s` to a state that realizes signature element (label, blk):
// inert silent edges first, then the observable edge. Appends labels.
void realize(const std::vector<std::vector<UnionEdge>>& out, const Refined& r,
             std::uint32_t s, const std::pair<std::string, int>& elem,
             std::vector<std::string>& trace) {
  for (const auto& e : out[s]) {
    if (!(e.silent && r.block[e.dst] == r.block[e.src])) {
      if (e.label == elem.first && r.block[e.dst] == elem.second) {
        trace.push_back(e.label);
        return;
      }
      continue;
    }
    if (r.sig[e.dst].count(elem)) {
      trace.push_back(e.label);
      realize(out, r, e.dst, elem, trace);
      return;
    }
  }
}

}  // namespace

BisimResult branchingBisimilar(const Lts& a, const Lts& b) {
  std::size_t n = 0;
  auto out = unionAdjacency(a, b, n);
  Refined r = refine(n, out);
  std::uint32_t ia = 0, ib = static_cast<std::uint32_t>(a.numStates);
  if (r.block[ia] == r.block[ib]) return {true, {}};
  BisimResult res;
  res.equivalent = false;
  // Pick the smallest signature element present on one side only and show the
  // path realizing it from whichever side has it.
  std::vector<std::pair<std::string, int>> diff;
  std::set_symmetric_difference(r.sig[ia].begin(), r.sig[ia].end(), r.sig[ib].begin(),
                                r.sig[ib].end(), std::back_inserter(diff));
  if (!diff.empty()) {
    auto elem = diff.front();
    std::uint32_t from = r.sig[ia].count(elem) ? ia : ib;
    realize(out, r, from, elem, res.trace);
  }
  return res;
}

Lts quotientLts(const Lts& a) {
  std::size_t n = 0;
  Lts empty;
  auto out = unionAdjacency(a, empty, n);
  Refined r = refine(n, out);
  // Renumber reachable blocks in BFS order from the initial block.
  std::map<int, std::uint32_t> num;
  std::vector<int> order{r.block[0]};
  num[r.block[0]] = 0;
  std::map<int, std::set<std::pair<std::string, int>>> succ;  // block -> (label, block)
  for (const auto& e : a.edges) {
    int bs = r.block[e.src], bd = r.block[e.dst];
    if (e.silent && bs == bd) continue;
    succ[bs].insert({e.label, bd});
  }
  Lts q;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int blk = order[i];
    for (const auto& [label, bd] : succ[blk]) {
      if (!num.count(bd)) {
        num[bd] = static_cast<std::uint32_t>(order.size());
        order.push_back(bd);
      }
      q.edges.push_back({static_cast<std::uint32_t>(i), num[bd], label, label == "tau",
                         false, false, {}, {}});
    }
  }
  q.numStates = order.size();
  q.canStep.assign(q.numStates, 0);
  q.dead.assign(q.numStates, 0);
  return q;
}

Lts interleaveLts(const Lts& a, const Lts& b) {
  std::vector<std::vector<const LtsEdge*>> outA(a.numStates), outB(b.numStates);
  for (const auto& e : a.edges) outA[e.src].push_back(&e);
  for (const auto& e : b.edges) outB[e.src].push_back(&e);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> order{{0, 0}};
  index[{0, 0}] = 0;
  Lts p;
  for (std::size_t cur = 0; cur < order.size(); ++cur) {
    auto [i, j] = order[cur];
    auto add = [&](std::uint32_t ni, std::uint32_t nj, const LtsEdge* e) {
      auto key = std::make_pair(ni, nj);
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, static_cast<std::uint32_t>(order.size())).first;
        order.push_back(key);
      }
      p.edges.push_back({static_cast<std::uint32_t>(cur), it->second, e->label, e->silent,
                         e->changed, e->write, e->wProc, e->wVar});
    };
    for (const auto* e : outA[i]) add(e->dst, j, e);
    for (const auto* e : outB[j]) add(i, e->dst, e);
  }
  p.numStates = order.size();
  p.canStep.assign(p.numStates, 0);
  p.dead.assign(p.numStates, 0);
  return p;
}

BisimResult checkOperationalEquivalence(const ProgPtr& g,
                                        const std::vector<ProcessName>& procs,
                                        const ExploreOptions& opts) {
  ProgramFamily global;
  global.global = g;
  Lts lg = exploreProgramFamily(global, opts);
  Lts product;
  bool first = true;
  for (const auto& p : procs) {
    ProgramFamily role;
    role.global = project(g, p);
    Lts lp = quotientLts(exploreProgramFamily(role, opts));
    product = first ? std::move(lp) : quotientLts(interleaveLts(product, lp));
    first = false;
  }
  if (first) {
    ProgramFamily one;
    one.global = oneProg();
    product = exploreProgramFamily(one, opts);
  }
  return branchingBisimilar(lg, product);
}

}  // namespace chor
