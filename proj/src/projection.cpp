#include "chor/projection.hpp"

namespace chor {

ProgPtr project(const ProgPtr& g, const ProcessName& p) {
  switch (g->kind) {
    case Prog::Kind::One:
      return oneProg();
    case Prog::Kind::Act: {
      auto subj = subjectOf(g->act);
      if (subj && *subj == p) return g;
      return actProg(Action::tau());
    }
    case Prog::Kind::Choice:
      return choiceProg(project(g->l, p), project(g->r, p));
    case Prog::Kind::Par:
      return parProg(project(g->l, p), project(g->r, p));
    case Prog::Kind::Seq:
      return seqProg(project(g->l, p), project(g->r, p));
  }
  throw ChorError("unreachable program kind");
}

std::map<ProcessName, ProgPtr> projectAll(const ProgPtr& g,
                                          const std::vector<ProcessName>& procs) {
  std::map<ProcessName, ProgPtr> out;
  for (const auto& p : procs) out[p] = project(g, p);
  return out;
}

}  // namespace chor
