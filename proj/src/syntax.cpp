#include "chor/syntax.hpp"

#include <functional>

namespace chor {

ChannelName makeChannel(ProcessName from, ProcessName to) {
  if (from == to) throw ChorError("malformed channel: sender equals receiver ('" + from.name + "')");
  return {std::move(from), std::move(to)};
}

std::string renderValue(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Unit: return "unit";
    case Value::Kind::Bool: return v.b ? "true" : "false";
    case Value::Kind::Int: return std::to_string(v.i);
    case Value::Kind::Str: {
      std::string out = "\"";
      for (char c : v.s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case Value::Kind::Acq: return "acq";
    case Value::Kind::Rel: return "rel";
  }
  return "?";
}

ExprPtr varExpr(Variable x) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->var = std::move(x);
  return e;
}

ExprPtr litExpr(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->lit = std::move(v);
  return e;
}

static ExprPtr mkExpr(Expr::Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr eqExpr(ExprPtr a, ExprPtr b) { return mkExpr(Expr::Kind::Eq, std::move(a), std::move(b)); }
ExprPtr notExpr(ExprPtr a) { return mkExpr(Expr::Kind::Not, std::move(a), nullptr); }
ExprPtr andExpr(ExprPtr a, ExprPtr b) { return mkExpr(Expr::Kind::And, std::move(a), std::move(b)); }
ExprPtr addExpr(ExprPtr a, ExprPtr b) { return mkExpr(Expr::Kind::Add, std::move(a), std::move(b)); }
ExprPtr md5Expr(ExprPtr a) { return mkExpr(Expr::Kind::Md5, std::move(a), nullptr); }

bool exprEqual(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var: return a->var == b->var;
    case Expr::Kind::Lit: return a->lit == b->lit;
    case Expr::Kind::Not:
    case Expr::Kind::Md5: return exprEqual(a->lhs, b->lhs);
    default: return exprEqual(a->lhs, b->lhs) && exprEqual(a->rhs, b->rhs);
  }
}

static void collectVars(const ExprPtr& e, std::vector<Variable>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) out.push_back(e->var);
  collectVars(e->lhs, out);
  collectVars(e->rhs, out);
}

std::vector<Variable> exprVariables(const ExprPtr& e) {
  std::vector<Variable> out;
  collectVars(e, out);
  return out;
}

// Precedence for printing: && < == < + < unary (~, md5, atoms).
static int exprPrec(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::And: return 1;
    case Expr::Kind::Eq: return 2;
    case Expr::Kind::Add: return 3;
    default: return 4;
  }
}

static std::string renderExprPrec(const ExprPtr& e, int minPrec) {
  int p = exprPrec(e->kind);
  std::string out;
  switch (e->kind) {
    case Expr::Kind::Var: return e->var.name;
    case Expr::Kind::Lit: return renderValue(e->lit);
    case Expr::Kind::Not: return "~" + renderExprPrec(e->lhs, 4);
    case Expr::Kind::Md5: return "md5(" + renderExprPrec(e->lhs, 0) + ")";
    case Expr::Kind::Eq:
      out = renderExprPrec(e->lhs, p + 1) + " == " + renderExprPrec(e->rhs, p + 1);
      break;
    case Expr::Kind::And:
      out = renderExprPrec(e->lhs, p) + " && " + renderExprPrec(e->rhs, p + 1);
      break;
    case Expr::Kind::Add:
      out = renderExprPrec(e->lhs, p) + " + " + renderExprPrec(e->rhs, p + 1);
      break;
  }
  return p < minPrec ? "(" + out + ")" : out;
}

std::string renderExpr(const ExprPtr& e) { return renderExprPrec(e, 0); }

Action Action::test(ProcessName p, ExprPtr e) {
  Action a;
  a.kind = Kind::Test;
  a.proc = std::move(p);
  a.expr = std::move(e);
  return a;
}

Action Action::assign(ProcessName q, Variable y, ExprPtr e) {
  Action a;
  a.kind = Kind::Assign;
  a.proc = std::move(q);
  a.var = std::move(y);
  a.expr = std::move(e);
  return a;
}

Action Action::send(ChannelName ch, ExprPtr e) {
  Action a;
  a.kind = Kind::Send;
  a.chan = std::move(ch);
  a.expr = std::move(e);
  return a;
}

Action Action::recv(ChannelName ch, Variable y) {
  Action a;
  a.kind = Kind::Recv;
  a.chan = std::move(ch);
  a.var = std::move(y);
  return a;
}

bool actionEqual(const Action& a, const Action& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Action::Kind::Tau: return true;
    case Action::Kind::Test: return a.proc == b.proc && exprEqual(a.expr, b.expr);
    case Action::Kind::Assign:
      return a.proc == b.proc && a.var == b.var && exprEqual(a.expr, b.expr);
    case Action::Kind::Send: return a.chan == b.chan && exprEqual(a.expr, b.expr);
    case Action::Kind::Recv: return a.chan == b.chan && a.var == b.var;
  }
  return false;
}

std::optional<ProcessName> subjectOf(const Action& a) {
  switch (a.kind) {
    case Action::Kind::Test:
    case Action::Kind::Assign: return a.proc;
    case Action::Kind::Send: return a.chan.from;
    case Action::Kind::Recv: return a.chan.to;
    case Action::Kind::Tau: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<ChannelName> objectOf(const Action& a) {
  if (a.kind == Action::Kind::Send || a.kind == Action::Kind::Recv) return a.chan;
  return std::nullopt;
}

std::string renderAction(const Action& a) {
  switch (a.kind) {
    case Action::Kind::Tau: return "tau";
    case Action::Kind::Test: return "test(" + a.proc.name + "," + renderExpr(a.expr) + ")";
    case Action::Kind::Assign:
      return "assign(" + a.proc.name + "," + a.var.name + "," + renderExpr(a.expr) + ")";
    case Action::Kind::Send:
      return "send(" + a.chan.from.name + "," + a.chan.to.name + "," + renderExpr(a.expr) + ")";
    case Action::Kind::Recv:
      return "recv(" + a.chan.from.name + "," + a.chan.to.name + "," + a.var.name + ")";
  }
  return "?";
}

std::optional<ChannelName> objectOf(const GroundAction& a) {
  if (a.kind == Action::Kind::Send || a.kind == Action::Kind::Recv) return a.chan;
  return std::nullopt;
}

std::string renderGroundAction(const GroundAction& a) {
  switch (a.kind) {
    case Action::Kind::Tau: return "tau";
    case Action::Kind::Test: return "test(" + a.proc.name + ",true)";
    case Action::Kind::Assign:
      return "assign(" + a.proc.name + "," + a.var.name + "," + renderValue(a.val) + ")";
    case Action::Kind::Send:
      return "send(" + a.chan.from.name + "," + a.chan.to.name + "," + renderValue(a.val) + ")";
    case Action::Kind::Recv:
      return "recv(" + a.chan.from.name + "," + a.chan.to.name + "," + a.var.name + "," +
             renderValue(a.val) + ")";
  }
  return "?";
}

static std::size_t hashCombine(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

static std::size_t actionHash(const Action& a) {
  std::size_t h = static_cast<std::size_t>(a.kind) * 0x9e3779b9;
  h = hashCombine(h, std::hash<std::string>{}(a.proc.name));
  h = hashCombine(h, std::hash<std::string>{}(a.var.name));
  h = hashCombine(h, std::hash<std::string>{}(a.chan.from.name));
  h = hashCombine(h, std::hash<std::string>{}(a.chan.to.name));
  if (a.expr) h = hashCombine(h, std::hash<std::string>{}(renderExpr(a.expr)));
  return h;
}

ProgPtr oneProg() {
  static const ProgPtr one = [] {
    auto p = std::make_shared<Prog>();
    p->kind = Prog::Kind::One;
    p->hash = 0x1;
    return p;
  }();
  return one;
}

ProgPtr actProg(Action a) {
  auto p = std::make_shared<Prog>();
  p->kind = Prog::Kind::Act;
  p->actionCount = 1;
  p->hash = hashCombine(0x2, actionHash(a));
  p->act = std::move(a);
  return p;
}

static ProgPtr mkBin(Prog::Kind k, ProgPtr l, ProgPtr r) {
  auto p = std::make_shared<Prog>();
  p->kind = k;
  p->actionCount = l->actionCount + r->actionCount;
  p->hash = hashCombine(hashCombine(static_cast<std::size_t>(k) * 0x85ebca6b, l->hash), r->hash);
  p->l = std::move(l);
  p->r = std::move(r);
  return p;
}

ProgPtr choiceProg(ProgPtr l, ProgPtr r) { return mkBin(Prog::Kind::Choice, std::move(l), std::move(r)); }
ProgPtr parProg(ProgPtr l, ProgPtr r) { return mkBin(Prog::Kind::Par, std::move(l), std::move(r)); }
ProgPtr seqProg(ProgPtr l, ProgPtr r) { return mkBin(Prog::Kind::Seq, std::move(l), std::move(r)); }

ProgPtr seqNorm(ProgPtr l, ProgPtr r) {
  if (l->kind == Prog::Kind::One) return r;
  if (r->kind == Prog::Kind::One) return l;
  return seqProg(std::move(l), std::move(r));
}

ProgPtr parNorm(ProgPtr l, ProgPtr r) {
  if (l->kind == Prog::Kind::One) return r;
  if (r->kind == Prog::Kind::One) return l;
  return parProg(std::move(l), std::move(r));
}

bool progEqual(const ProgPtr& a, const ProgPtr& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case Prog::Kind::One: return true;
    case Prog::Kind::Act: return actionEqual(a->act, b->act);
    default: return progEqual(a->l, b->l) && progEqual(a->r, b->r);
  }
}

int actionCount(const ProgPtr& p) { return p->actionCount; }

static void collectSubjects(const ProgPtr& p, std::set<ProcessName>& out) {
  switch (p->kind) {
    case Prog::Kind::One: return;
    case Prog::Kind::Act: {
      if (auto s = subjectOf(p->act)) out.insert(*s);
      return;
    }
    default:
      collectSubjects(p->l, out);
      collectSubjects(p->r, out);
  }
}

std::set<ProcessName> subjectsOf(const ProgPtr& p) {
  std::set<ProcessName> out;
  collectSubjects(p, out);
  return out;
}

bool isGlobal(const ProgPtr& p) { return subjectsOf(p).size() >= 2; }
bool isLocal(const ProgPtr& p) { return subjectsOf(p).size() <= 1; }

ProgPtr expandComm(const ProcessName& p, ExprPtr e, const ProcessName& q, const Variable& y) {
  ChannelName ch = makeChannel(p, q);
  return seqProg(actProg(Action::send(ch, std::move(e))), actProg(Action::recv(ch, y)));
}

static void checkAcqRelArgs(const ProcessName& p, const ProcessName& q,
                            const std::vector<Variable>& ys) {
  if (ys.empty()) throw ChorError("malformed shorthand: empty variable list");
  if (p == q) throw ChorError("malformed shorthand: sender equals receiver ('" + p.name + "')");
  for (const auto& y : ys)
    if (y.isSink()) throw ChorError("malformed shorthand: '_' cannot be acquired or released");
}

ProgPtr expandAcq(const ProcessName& p, const ProcessName& q, const std::vector<Variable>& ys) {
  checkAcqRelArgs(p, q, ys);
  auto single = [&](const Variable& y) {
    return seqProg(expandComm(p, litExpr(Value::acq()), q, y),
                   expandComm(q, litExpr(Value::unit()), p, Variable{"_"}));
  };
  ProgPtr out = single(ys.back());
  for (auto it = ys.rbegin() + 1; it != ys.rend(); ++it) out = seqProg(single(*it), out);
  return out;
}

ProgPtr expandRel(const ProcessName& p, const ProcessName& q, const std::vector<Variable>& ys) {
  checkAcqRelArgs(p, q, ys);
  ProgPtr out = expandComm(p, litExpr(Value::rel()), q, ys.back());
  for (auto it = ys.rbegin() + 1; it != ys.rend(); ++it)
    out = seqProg(expandComm(p, litExpr(Value::rel()), q, *it), out);
  return out;
}

ProgPtr expandIf(const ProcessName& p, ExprPtr e, ProgPtr thenP, ProgPtr elseP) {
  ProgPtr thenArm = seqProg(actProg(Action::test(p, e)), std::move(thenP));
  ProgPtr elseArm = seqProg(actProg(Action::test(p, notExpr(std::move(e)))), std::move(elseP));
  return choiceProg(std::move(thenArm), std::move(elseArm));
}

}  // namespace chor
