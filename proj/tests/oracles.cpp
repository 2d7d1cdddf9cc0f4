#include "oracles.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace chor::oracle {

Counts dfsExploreSystem(const SystemState& init, const SystemContext& ctx) {
  Counts c;
  std::set<std::string> seen;
  std::function<void(const SystemState&)> go = [&](const SystemState& st) {
    if (!seen.insert(serializeState(st)).second) return;
    ++c.states;
    auto succ = systemSteps(st, ctx);
    c.edges += succ.size();
    if (succ.empty() && programCanStep(st)) ++c.dead;
    for (auto& s : succ) go(s.next);
  };
  go(init);
  return c;
}

bool naiveBranchingBisim(const Lts& a, const Lts& b) {
  std::size_t n1 = a.numStates, n = n1 + b.numStates;
  struct E {
    std::string lab;
    bool silent;
    std::size_t dst;
  };
  std::vector<std::vector<E>> succ(n);
  for (const auto& e : a.edges) succ[e.src].push_back({e.label, e.silent, e.dst});
  for (const auto& e : b.edges) succ[e.src + n1].push_back({e.label, e.silent, e.dst + n1});
  std::vector<char> rel(n * n, 1);
  auto related = [&](std::size_t i, std::size_t j) { return rel[i * n + j] != 0; };
  // (i,j) survives iff every move of i is matched by j after silent stuttering
  // through states still related to i, and vice versa.
  auto matched = [&](std::size_t i, std::size_t j) {
    for (const auto& e : succ[i]) {
      if (e.silent && related(e.dst, j)) continue;
      bool found = false;
      std::vector<std::size_t> stack{j};
      std::set<std::size_t> visited{j};
      while (!stack.empty() && !found) {
        std::size_t jt = stack.back();
        stack.pop_back();
        if (related(i, jt)) {
          for (const auto& f : succ[jt]) {
            if (f.lab == e.lab && related(e.dst, f.dst)) {
              found = true;
              break;
            }
            if (f.silent && visited.insert(f.dst).second) stack.push_back(f.dst);
          }
        }
      }
      if (!found) return false;
    }
    return true;
  };
  auto matchedRev = [&](std::size_t i, std::size_t j) {
    for (const auto& e : succ[j]) {
      if (e.silent && related(i, e.dst)) continue;
      bool found = false;
      std::vector<std::size_t> stack{i};
      std::set<std::size_t> visited{i};
      while (!stack.empty() && !found) {
        std::size_t it = stack.back();
        stack.pop_back();
        if (related(it, j)) {
          for (const auto& f : succ[it]) {
            if (f.lab == e.lab && related(f.dst, e.dst)) {
              found = true;
              break;
            }
            if (f.silent && visited.insert(f.dst).second) stack.push_back(f.dst);
          }
        }
      }
      if (!found) return false;
    }
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!related(i, j)) continue;
        if (!matched(i, j) || !matchedRev(i, j)) {
          rel[i * n + j] = 0;
          changed = true;
        }
      }
  }
  return related(0, n1);
}

bool stateHolds(const Lts& l, std::size_t s, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::Not: return !stateHolds(l, s, f->l);
    case Formula::Kind::And: return stateHolds(l, s, f->l) && stateHolds(l, s, f->r);
    case Formula::Kind::Dead: return l.dead[s];
    case Formula::Kind::Atom: {
      auto it = l.states[s].stores.find(f->proc);
      if (it == l.states[s].stores.end()) return false;
      auto v = readExpr(it->second, f->proc, f->expr, PermMode::Free);
      return v && v->kind == Value::Kind::Bool && v->b;
    }
    default: throw ChorError("oracle: not a state formula");
  }
}

bool agOracle(const Lts& l, const FormulaPtr& body) {
  for (std::size_t s = 0; s < l.numStates; ++s)
    if (!stateHolds(l, s, body)) return false;
  return true;
}

bool auOracle(const Lts& l, const FormulaPtr& f1, const FormulaPtr& f2) {
  std::vector<std::vector<std::size_t>> out(l.numStates);
  for (const auto& e : l.edges) out[e.src].push_back(e.dst);
  std::vector<int> memo(l.numStates, -1);
  std::function<bool(std::size_t)> go = [&](std::size_t s) -> bool {
    if (memo[s] >= 0) return memo[s] != 0;
    bool r;
    if (stateHolds(l, s, f2)) {
      r = true;
    } else if (!stateHolds(l, s, f1) || out[s].empty()) {
      r = false;
    } else {
      r = true;
      for (auto t : out[s]) r = r && go(t);
    }
    memo[s] = r ? 1 : 0;
    return r;
  };
  return go(0);
}

namespace {

Action randomAction(std::mt19937& rng, int maxProcs) {
  auto pick = [&](int k) { return static_cast<int>(rng() % k); };
  std::vector<ProcessName> procs;
  for (int i = 0; i < maxProcs; ++i) procs.push_back({std::string(1, char('a' + i))});
  ProcessName p = procs[pick(maxProcs)];
  ProcessName q = procs[pick(maxProcs)];
  while (q == p && maxProcs > 1) q = procs[pick(maxProcs)];
  if (q == p) q = {"z"};
  Variable x{std::string(1, char('u' + pick(3)))};
  switch (pick(5)) {
    case 0: return Action::tau();
    case 1: return Action::test(p, litExpr(Value::boolean(true)));
    case 2: return Action::assign(p, x, litExpr(Value::integer(pick(3))));
    case 3: return Action::send(makeChannel(p, q), litExpr(Value::integer(pick(3))));
    default: return Action::recv(makeChannel(p, q), x);
  }
}

ProgPtr randomProgramN(std::mt19937& rng, int budget, int maxProcs) {
  if (budget <= 0) return oneProg();
  if (budget == 1) return actProg(randomAction(rng, maxProcs));
  int left = 1 + static_cast<int>(rng() % (budget - 1));
  ProgPtr l = randomProgramN(rng, left, maxProcs);
  ProgPtr r = randomProgramN(rng, budget - left, maxProcs);
  switch (rng() % 3) {
    case 0: return seqProg(l, r);
    case 1: return choiceProg(l, r);
    default: return parProg(l, r);
  }
}

}  // namespace

ProgPtr randomProgram(std::mt19937& rng, int maxActions, int maxProcs) {
  int n = 1 + static_cast<int>(rng() % maxActions);
  return randomProgramN(rng, n, maxProcs);
}

ProgPtr insertRandomTau(const ProgPtr& p, std::mt19937& rng) {
  // Walk to a uniformly random node and wrap it in a tau prefix or suffix.
  int nodes = 0;
  std::function<int(const ProgPtr&)> count = [&](const ProgPtr& q) -> int {
    if (q->kind == Prog::Kind::One || q->kind == Prog::Kind::Act) return 1;
    return 1 + count(q->l) + count(q->r);
  };
  nodes = count(p);
  int target = static_cast<int>(rng() % nodes);
  bool before = rng() % 2 == 0;
  int seen = 0;
  std::function<ProgPtr(const ProgPtr&)> rebuild = [&](const ProgPtr& q) -> ProgPtr {
    int self = seen++;
    if (self == target) {
      ProgPtr t = actProg(Action::tau());
      return before ? seqProg(t, q) : seqProg(q, t);
    }
    switch (q->kind) {
      case Prog::Kind::One:
      case Prog::Kind::Act: return q;
      case Prog::Kind::Seq: return seqProg(rebuild(q->l), rebuild(q->r));
      case Prog::Kind::Choice: return choiceProg(rebuild(q->l), rebuild(q->r));
      case Prog::Kind::Par: return parProg(rebuild(q->l), rebuild(q->r));
    }
    return q;
  };
  return rebuild(p);
}

ProgPtr eraseTau(const ProgPtr& p) {
  switch (p->kind) {
    case Prog::Kind::One: return oneProg();
    case Prog::Kind::Act:
      return p->act.kind == Action::Kind::Tau ? oneProg() : p;
    case Prog::Kind::Seq: return seqNorm(eraseTau(p->l), eraseTau(p->r));
    case Prog::Kind::Par: return parNorm(eraseTau(p->l), eraseTau(p->r));
    case Prog::Kind::Choice: {
      ProgPtr l = eraseTau(p->l), r = eraseTau(p->r);
      return choiceProg(l, r);
    }
  }
  return p;
}

std::string slurpFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChorError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ChoreographyFile loadCorpus(const std::string& name) {
  return parseChoreography(slurpFile(std::string(CORPUS_DIR) + "/" + name + ".chor"));
}

}  // namespace chor::oracle
