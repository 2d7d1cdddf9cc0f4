#include "chor/semantics.hpp"

#include <sstream>

#include "chor/md5.hpp"
#include "chor/projection.hpp"

namespace chor {

std::optional<Value> readExpr(const Store& s, const ProcessName& reader, const ExprPtr& e,
                              PermMode mode) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = s.vars.find(e->var);
      if (it == s.vars.end()) return std::nullopt;
      if (mode == PermMode::Checked && !it->second.perms.count(reader)) return std::nullopt;
      return it->second.val;
    }
    case Expr::Kind::Lit:
      return e->lit;
    case Expr::Kind::Eq: {
      auto a = readExpr(s, reader, e->lhs, mode);
      auto b = readExpr(s, reader, e->rhs, mode);
      if (!a || !b || a->kind != b->kind) return std::nullopt;
      return Value::boolean(*a == *b);
    }
    case Expr::Kind::Not: {
      auto a = readExpr(s, reader, e->lhs, mode);
      if (!a || a->kind != Value::Kind::Bool) return std::nullopt;
      return Value::boolean(!a->b);
    }
    case Expr::Kind::And: {
      auto a = readExpr(s, reader, e->lhs, mode);
      auto b = readExpr(s, reader, e->rhs, mode);
      if (!a || !b || a->kind != Value::Kind::Bool || b->kind != Value::Kind::Bool)
        return std::nullopt;
      return Value::boolean(a->b && b->b);
    }
    case Expr::Kind::Add: {
      auto a = readExpr(s, reader, e->lhs, mode);
      auto b = readExpr(s, reader, e->rhs, mode);
      if (!a || !b || a->kind != b->kind) return std::nullopt;
      if (a->kind == Value::Kind::Int) {
        std::int64_t sum = 0;
        if (__builtin_add_overflow(a->i, b->i, &sum)) return std::nullopt;
        return Value::integer(sum);
      }
      if (a->kind == Value::Kind::Str) return Value::str(a->s + b->s);
      return std::nullopt;
    }
    case Expr::Kind::Md5: {
      auto a = readExpr(s, reader, e->lhs, mode);
      if (!a || a->kind != Value::Kind::Str) return std::nullopt;
      return Value::str(md5Hex(a->s));
    }
  }
  return std::nullopt;
}

bool writeVal(Store& s, const ProcessName& writer, const Variable& y, const Value& v,
              const std::set<ProcessName>& allProcs) {
  if (y.isSink()) return true;
  auto it = s.vars.find(y);
  if (it == s.vars.end()) return false;
  if (!it->second.perms.count(writer)) return false;
  if (v.kind == Value::Kind::Acq) {
    it->second.perms = {writer};
  } else if (v.kind == Value::Kind::Rel) {
    it->second.perms = allProcs;
  } else {
    it->second.val = v;
  }
  return true;
}

std::vector<ProgStep> programSteps(const ProgPtr& p) {
  std::vector<ProgStep> out;
  switch (p->kind) {
    case Prog::Kind::One:
      break;
    case Prog::Kind::Act:
      out.push_back({p->act, oneProg()});
      break;
    case Prog::Kind::Choice:
      for (auto& s : programSteps(p->l)) out.push_back(std::move(s));
      for (auto& s : programSteps(p->r)) out.push_back(std::move(s));
      break;
    case Prog::Kind::Par:
      for (auto& s : programSteps(p->l)) out.push_back({s.act, parNorm(s.next, p->r)});
      for (auto& s : programSteps(p->r)) out.push_back({s.act, parNorm(p->l, s.next)});
      break;
    case Prog::Kind::Seq: {
      for (auto& s : programSteps(p->l)) out.push_back({s.act, seqNorm(s.next, p->r)});
      std::set<ProcessName> left = subjectsOf(p->l);
      for (auto& s : programSteps(p->r)) {
        auto subj = subjectOf(s.act);
        if (!subj || left.count(*subj)) continue;
        out.push_back({s.act, seqNorm(p->l, s.next)});
      }
      break;
    }
  }
  return out;
}

std::vector<FamilyStep> familySteps(const ProgramFamily& f) {
  std::vector<FamilyStep> out;
  if (!f.local) {
    for (auto& s : programSteps(f.global)) {
      ProgramFamily nf = f;
      nf.global = s.next;
      out.push_back({s.act, std::move(nf)});
    }
    return out;
  }
  for (std::size_t i = 0; i < f.locals.size(); ++i) {
    for (auto& s : programSteps(f.locals[i].second)) {
      ProgramFamily nf = f;
      nf.locals[i].second = s.next;
      out.push_back({s.act, std::move(nf)});
    }
  }
  return out;
}

namespace {

const Store& storeOf(const StoreFamily& fam, const ProcessName& p) {
  static const Store empty;
  auto it = fam.find(p);
  return it == fam.end() ? empty : it->second;
}

}  // namespace

std::vector<SystemStep> systemSteps(const SystemState& st, const SystemContext& ctx) {
  std::vector<SystemStep> out;
  for (auto& fs : familySteps(st.progs)) {
    const Action& a = fs.act;
    GroundAction g;
    g.kind = a.kind;
    SystemState next = st;
    next.progs = fs.next;
    bool changed = false;
    switch (a.kind) {
      case Action::Kind::Tau:
        break;
      case Action::Kind::Test: {
        auto v = readExpr(storeOf(st.stores, a.proc), a.proc, a.expr, PermMode::Checked);
        if (!v || v->kind != Value::Kind::Bool || !v->b) continue;
        g.proc = a.proc;
        break;
      }
      case Action::Kind::Assign: {
        const Store& s = storeOf(st.stores, a.proc);
        auto v = readExpr(s, a.proc, a.expr, PermMode::Checked);
        if (!v) continue;
        Store ns = s;
        if (!writeVal(ns, a.proc, a.var, *v, ctx.procs)) continue;
        changed = !a.var.isSink() && ns.vars.at(a.var).val != s.vars.at(a.var).val;
        next.stores[a.proc] = std::move(ns);
        g.proc = a.proc;
        g.var = a.var;
        g.val = *v;
        break;
      }
      case Action::Kind::Send: {
        auto it = st.chans.find(a.chan);
        if (it == st.chans.end() || !it->second.hasSpace()) continue;
        auto v = readExpr(storeOf(st.stores, a.chan.from), a.chan.from, a.expr,
                          PermMode::Checked);
        if (!v) continue;
        next.chans[a.chan].buf.push_back(*v);
        g.chan = a.chan;
        g.val = *v;
        break;
      }
      case Action::Kind::Recv: {
        auto it = st.chans.find(a.chan);
        if (it == st.chans.end() || it->second.buf.empty()) continue;
        Value v = it->second.buf.front();
        const Store& s = storeOf(st.stores, a.chan.to);
        Store ns = s;
        // the sender's permission is what counts: a receive is a remote write
        if (!writeVal(ns, a.chan.from, a.var, v, ctx.procs)) continue;
        changed = !a.var.isSink() && ns.vars.at(a.var).val != s.vars.at(a.var).val;
        next.stores[a.chan.to] = std::move(ns);
        next.chans[a.chan].buf.erase(next.chans[a.chan].buf.begin());
        g.chan = a.chan;
        g.var = a.var;
        g.val = v;
        break;
      }
    }
    out.push_back({std::move(g), changed, std::move(next)});
  }
  return out;
}

bool programCanStep(const SystemState& st) { return !familySteps(st.progs).empty(); }

SystemState initialState(const ChoreographyFile& file, bool local) {
  SystemState st;
  std::set<ProcessName> all(file.processes.begin(), file.processes.end());
  for (const auto& p : file.processes) {
    Store s;
    auto it = file.stores.find(p);
    if (it != file.stores.end())
      for (const auto& [x, v] : it->second) s.vars[x] = {v, all};
    st.stores[p] = std::move(s);
  }
  for (const auto& p : file.processes)
    for (const auto& q : file.processes) {
      if (p == q) continue;
      ChannelName ch{p, q};
      ChannelState cs;
      auto ov = file.capacityOverrides.find(ch);
      cs.cap = ov != file.capacityOverrides.end() ? std::optional(ov->second)
                                                  : file.defaultCapacity;
      st.chans[ch] = std::move(cs);
    }
  if (local) {
    st.progs.local = true;
    for (const auto& p : file.processes)
      st.progs.locals.emplace_back(p, project(file.main, p));
  } else {
    st.progs.global = file.main;
  }
  return st;
}

SystemContext contextOf(const ChoreographyFile& file) {
  return {std::set<ProcessName>(file.processes.begin(), file.processes.end())};
}

std::string serializeState(const SystemState& st) {
  std::ostringstream os;
  if (st.progs.local) {
    for (const auto& [p, pr] : st.progs.locals) os << "L " << p.name << ": " << renderProgram(pr) << "\n";
  } else {
    os << "G: " << renderProgram(st.progs.global) << "\n";
  }
  for (const auto& [p, s] : st.stores) {
    os << p.name << " {";
    for (const auto& [x, vs] : s.vars) {
      os << ' ' << x.name << '=' << renderValue(vs.val) << '@';
      for (const auto& r : vs.perms) os << r.name << ',';
    }
    os << " }\n";
  }
  for (const auto& [ch, cs] : st.chans) {
    os << ch.from.name << '>' << ch.to.name << " [";
    for (const auto& v : cs.buf) os << ' ' << renderValue(v);
    os << " ]\n";
  }
  return os.str();
}

}  // namespace chor
