#include "chor/statespace.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace chor {

namespace {

std::string serializeFamily(const ProgramFamily& f) {
  if (!f.local) return "G: " + renderProgram(f.global);
  std::string out;
  for (const auto& [p, pr] : f.locals) out += "L " + p.name + ": " + renderProgram(pr) + "\n";
  return out;
}

void checkLimit(std::size_t n, std::size_t limit) {
  if (n > limit)
    throw ChorError("exploration exceeded the state limit of " + std::to_string(limit) +
                    " states");
}

int familyActionCount(const ProgramFamily& f) {
  if (!f.local) return actionCount(f.global);
  int n = 0;
  for (const auto& [p, pr] : f.locals) n += actionCount(pr);
  return n;
}

// Generic BFS over a successor function working on serialized keys. Every
// step consumes at least one action (a choice commit drops the other arm
// too), so sorting states by remaining action count — BFS order breaking
// ties — yields a deterministic topological numbering with src < dst on
// every edge.
template <typename State, typename Succ, typename Key, typename Rank, typename Keep>
Lts bfs(const State& init, const ExploreOptions& opts, Succ&& successors, Key&& key,
        Rank&& rank, Keep&& keep) {
  Lts lts;
  std::unordered_map<std::string, std::uint32_t> index;
  index.emplace(key(init), 0);
  keep(lts, init);
  std::vector<int> ranks{rank(init)};
  lts.numStates = 1;
  std::deque<State> pending{init};
  for (std::size_t cur = 0; !pending.empty(); ++cur, pending.pop_front()) {
    const State& st = pending.front();
    auto succ = successors(st);
    std::sort(succ.begin(), succ.end(), [&](const auto& a, const auto& b) {
      if (a.first.label != b.first.label) return a.first.label < b.first.label;
      return key(a.second) < key(b.second);
    });
    for (auto& [edge, next] : succ) {
      std::string k = key(next);
      auto [it, fresh] = index.emplace(std::move(k), static_cast<std::uint32_t>(lts.numStates));
      if (fresh) {
        checkLimit(lts.numStates + 1, opts.limit);
        ++lts.numStates;
        ranks.push_back(rank(next));
        keep(lts, next);
        pending.push_back(next);
      }
      LtsEdge e = edge;
      e.src = static_cast<std::uint32_t>(cur);
      e.dst = it->second;
      lts.edges.push_back(std::move(e));
    }
  }
  std::vector<std::uint32_t> order(lts.numStates);
  for (std::uint32_t i = 0; i < lts.numStates; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (ranks[a] != ranks[b]) return ranks[a] > ranks[b];
    return a < b;
  });
  std::vector<std::uint32_t> renum(lts.numStates);
  for (std::uint32_t i = 0; i < lts.numStates; ++i) renum[order[i]] = i;
  for (auto& e : lts.edges) {
    e.src = renum[e.src];
    e.dst = renum[e.dst];
    if (e.dst <= e.src) throw ChorError("internal error: exploration produced a back edge");
  }
  std::sort(lts.edges.begin(), lts.edges.end(), [](const LtsEdge& a, const LtsEdge& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.label != b.label) return a.label < b.label;
    return a.dst < b.dst;
  });
  if (!lts.canStep.empty()) {
    std::vector<std::uint8_t> cs(lts.numStates);
    for (std::uint32_t i = 0; i < lts.numStates; ++i) cs[i] = lts.canStep[order[i]];
    lts.canStep = std::move(cs);
  }
  if (!lts.states.empty()) {
    std::vector<SystemState> ss;
    ss.reserve(lts.numStates);
    for (std::uint32_t i = 0; i < lts.numStates; ++i) ss.push_back(std::move(lts.states[order[i]]));
    lts.states = std::move(ss);
  }
  return lts;
}

}  // namespace

Lts exploreSystem(const SystemState& init, const SystemContext& ctx,
                  const ExploreOptions& opts) {
  Lts lts = bfs(
      init, opts,
      [&](const SystemState& st) {
        std::vector<std::pair<LtsEdge, SystemState>> out;
        for (auto& s : systemSteps(st, ctx)) {
          LtsEdge e;
          e.label = renderGroundAction(s.ground);
          e.silent = s.ground.kind == Action::Kind::Tau;
          e.changed = s.changed;
          if (s.ground.kind == Action::Kind::Assign) {
            e.write = true;
            e.wProc = s.ground.proc;
            e.wVar = s.ground.var;
          } else if (s.ground.kind == Action::Kind::Recv) {
            e.write = true;
            e.wProc = s.ground.chan.to;
            e.wVar = s.ground.var;
          }
          out.emplace_back(std::move(e), std::move(s.next));
        }
        return out;
      },
      serializeState, [](const SystemState& st) { return familyActionCount(st.progs); },
      [&](Lts& l, const SystemState& st) {
        l.canStep.push_back(programCanStep(st) ? 1 : 0);
        if (opts.keepStates) l.states.push_back(st);
      });
  lts.dead.resize(lts.numStates, 0);
  std::vector<std::uint8_t> hasSucc(lts.numStates, 0);
  for (const auto& e : lts.edges) hasSucc[e.src] = 1;
  for (std::size_t i = 0; i < lts.numStates; ++i)
    lts.dead[i] = lts.canStep[i] && !hasSucc[i];
  return lts;
}

Lts exploreProgramFamily(const ProgramFamily& init, const ExploreOptions& opts) {
  Lts lts = bfs(
      init, opts,
      [&](const ProgramFamily& f) {
        std::vector<std::pair<LtsEdge, ProgramFamily>> out;
        for (auto& s : familySteps(f)) {
          LtsEdge e;
          e.label = renderAction(s.act);
          e.silent = s.act.kind == Action::Kind::Tau;
          out.emplace_back(std::move(e), std::move(s.next));
        }
        return out;
      },
      serializeFamily, familyActionCount, [](Lts&, const ProgramFamily&) {});
  lts.canStep.assign(lts.numStates, 0);
  lts.dead.assign(lts.numStates, 0);
  return lts;
}

std::string exportAut(const Lts& l) {
  std::ostringstream os;
  os << "des (0," << l.edges.size() << "," << l.numStates << ")\n";
  for (const auto& e : l.edges) os << "(" << e.src << ",\"" << e.label << "\"," << e.dst << ")\n";
  return os.str();
}

std::string exportDot(const Lts& l) {
  std::ostringstream os;
  os << "digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t i = 0; i < l.numStates; ++i) {
    os << "  " << i;
    if (i < l.dead.size() && l.dead[i]) os << " [shape=doublecircle,color=red,label=\"" << i << " dead\"]";
    os << ";\n";
  }
  for (const auto& e : l.edges) {
    std::string label = e.label;
    std::string esc;
    for (char c : label) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    os << "  " << e.src << " -> " << e.dst << " [label=\"" << esc << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string exportJson(const Lts& l) {
  nlohmann::json j;
  j["states"] = l.numStates;
  j["initial"] = 0;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : l.edges)
    edges.push_back({{"src", e.src}, {"label", e.label}, {"dst", e.dst}});
  j["edges"] = std::move(edges);
  nlohmann::json dead = nlohmann::json::array();
  for (std::size_t i = 0; i < l.dead.size(); ++i)
    if (l.dead[i]) dead.push_back(i);
  j["deadStates"] = std::move(dead);
  return j.dump(2) + "\n";
}

}  // namespace chor
