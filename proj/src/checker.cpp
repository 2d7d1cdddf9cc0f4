#include "chor/checker.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "chor/parser.hpp"

namespace chor {

namespace {

FormulaPtr mk(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

FormulaPtr ttF() { return mk({Formula::Kind::True}); }
FormulaPtr notF(FormulaPtr f) { return mk({Formula::Kind::Not, std::move(f)}); }
FormulaPtr andF(FormulaPtr a, FormulaPtr b) {
  return mk({Formula::Kind::And, std::move(a), std::move(b)});
}
FormulaPtr egF(FormulaPtr f) { return mk({Formula::Kind::EG, std::move(f)}); }
FormulaPtr euF(FormulaPtr a, FormulaPtr b) {
  return mk({Formula::Kind::EU, std::move(a), std::move(b)});
}
FormulaPtr atomF(ProcessName p, ExprPtr e) {
  Formula f{Formula::Kind::Atom};
  f.proc = std::move(p);
  f.expr = std::move(e);
  return mk(std::move(f));
}
FormulaPtr axF(ProcessName q, Variable y, FormulaPtr f) {
  Formula g{Formula::Kind::AXvar, std::move(f)};
  g.proc = std::move(q);
  g.var = std::move(y);
  return mk(std::move(g));
}
FormulaPtr deadF() { return mk({Formula::Kind::Dead}); }

FormulaPtr ffF() { return notF(ttF()); }
FormulaPtr orF(FormulaPtr a, FormulaPtr b) {
  return notF(andF(notF(std::move(a)), notF(std::move(b))));
}
FormulaPtr agF(FormulaPtr f) { return notF(euF(ttF(), notF(std::move(f)))); }
FormulaPtr agLiteralF(FormulaPtr f) { return euF(ttF(), notF(std::move(f))); }
FormulaPtr auF(FormulaPtr a, FormulaPtr b) {
  FormulaPtr neither = notF(orF(a, b));
  return notF(orF(euF(notF(b), std::move(neither)), egF(notF(b))));
}

std::string renderFormula(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True: return "tt";
    case Formula::Kind::Not: return "!" + renderFormula(f->l);
    case Formula::Kind::And:
      return "(" + renderFormula(f->l) + " && " + renderFormula(f->r) + ")";
    case Formula::Kind::EG: return "EG(" + renderFormula(f->l) + ")";
    case Formula::Kind::EU:
      return "EU(" + renderFormula(f->l) + "," + renderFormula(f->r) + ")";
    case Formula::Kind::Atom: return f->proc.name + ":(" + renderExpr(f->expr) + ")";
    case Formula::Kind::AXvar:
      return "AX[" + f->proc.name + "." + f->var.name + "](" + renderFormula(f->l) + ")";
    case Formula::Kind::Dead: return "dead";
  }
  return "?";
}

std::vector<ProcessName> formulaProcesses(const FormulaPtr& f) {
  std::set<ProcessName> out;
  std::vector<const Formula*> todo{f.get()};
  while (!todo.empty()) {
    const Formula* g = todo.back();
    todo.pop_back();
    if (g->kind == Formula::Kind::Atom || g->kind == Formula::Kind::AXvar) out.insert(g->proc);
    if (g->l) todo.push_back(g->l.get());
    if (g->r) todo.push_back(g->r.get());
  }
  return {out.begin(), out.end()};
}

namespace {

class Labeler {
 public:
  explicit Labeler(const Lts& l) : lts_(l), out_(l.numStates) {
    for (const auto& e : l.edges) out_[e.src].push_back(&e);
  }

  const std::vector<char>& eval(const FormulaPtr& f) {
    auto it = memo_.find(f.get());
    if (it != memo_.end()) return it->second;
    std::size_t n = lts_.numStates;
    std::vector<char> sat(n, 0);
    switch (f->kind) {
      case Formula::Kind::True:
        sat.assign(n, 1);
        break;
      case Formula::Kind::Not: {
        const auto& a = eval(f->l);
        for (std::size_t s = 0; s < n; ++s) sat[s] = !a[s];
        break;
      }
      case Formula::Kind::And: {
        const auto& a = eval(f->l);
        const auto& b = eval(f->r);
        for (std::size_t s = 0; s < n; ++s) sat[s] = a[s] && b[s];
        break;
      }
      case Formula::Kind::EG: {
        const auto& a = eval(f->l);
        for (std::size_t s = n; s-- > 0;) {
          if (!a[s]) continue;
          if (out_[s].empty()) {
            sat[s] = 1;
            continue;
          }
          for (const auto* e : out_[s])
            if (sat[e->dst]) {
              sat[s] = 1;
              break;
            }
        }
        break;
      }
      case Formula::Kind::EU: {
        const auto& a = eval(f->l);
        const auto& b = eval(f->r);
        for (std::size_t s = n; s-- > 0;) {
          if (b[s]) {
            sat[s] = 1;
            continue;
          }
          if (!a[s]) continue;
          for (const auto* e : out_[s])
            if (sat[e->dst]) {
              sat[s] = 1;
              break;
            }
        }
        break;
      }
      case Formula::Kind::Atom: {
        for (std::size_t s = 0; s < n; ++s) {
          auto it2 = lts_.states[s].stores.find(f->proc);
          if (it2 == lts_.states[s].stores.end()) continue;
          auto v = readExpr(it2->second, f->proc, f->expr, PermMode::Free);
          sat[s] = v && v->kind == Value::Kind::Bool && v->b;
        }
        break;
      }
      case Formula::Kind::AXvar: {
        const auto& a = eval(f->l);
        sat.assign(n, 1);
        for (const auto& e : lts_.edges)
          if (e.write && e.changed && e.wProc == f->proc && e.wVar == f->var && !a[e.dst])
            sat[e.src] = 0;
        break;
      }
      case Formula::Kind::Dead:
        for (std::size_t s = 0; s < n; ++s) sat[s] = lts_.dead[s];
        break;
    }
    return memo_.emplace(f.get(), std::move(sat)).first->second;
  }

  const std::vector<const LtsEdge*>& out(std::size_t s) const { return out_[s]; }

 private:
  const Lts& lts_;
  std::vector<std::vector<const LtsEdge*>> out_;
  std::map<const Formula*, std::vector<char>> memo_;
};

bool isAgShape(const FormulaPtr& f) {
  return f->kind == Formula::Kind::Not && f->l->kind == Formula::Kind::EU &&
         f->l->l->kind == Formula::Kind::True;
}

}  // namespace

Verdict check(const Lts& l, const FormulaPtr& f) {
  if (l.states.size() != l.numStates)
    throw ChorError("model checking requires an LTS explored with state payloads");
  Labeler lab(l);
  Verdict v;
  v.holds = l.numStates > 0 && lab.eval(f)[0];
  if (!v.holds && isAgShape(f)) {
    // Shortest path to a state refuting the body.
    const auto& bad = lab.eval(f->l->r);
    std::vector<int> prevEdge(l.numStates, -1);
    std::vector<char> seen(l.numStates, 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    std::size_t goal = l.numStates;
    for (std::size_t i = 0; i < queue.size() && goal == l.numStates; ++i) {
      std::uint32_t s = queue[i];
      if (bad[s]) {
        goal = s;
        break;
      }
      for (const auto* e : lab.out(s)) {
        if (seen[e->dst]) continue;
        seen[e->dst] = 1;
        prevEdge[e->dst] = static_cast<int>(e - l.edges.data());
        queue.push_back(e->dst);
      }
    }
    if (goal < l.numStates) {
      std::vector<std::tuple<std::uint32_t, std::string, std::uint32_t>> path;
      for (std::uint32_t s = static_cast<std::uint32_t>(goal); prevEdge[s] >= 0;) {
        const auto& e = l.edges[prevEdge[s]];
        path.emplace_back(e.src, e.label, e.dst);
        s = e.src;
      }
      std::reverse(path.begin(), path.end());
      v.witness = std::move(path);
    }
  } else if (v.holds && (f->kind == Formula::Kind::EU || f->kind == Formula::Kind::EG)) {
    // Forward walk along satisfying states.
    const auto& sat = lab.eval(f);
    const std::vector<char>* stopAt =
        f->kind == Formula::Kind::EU ? &lab.eval(f->r) : nullptr;
    std::uint32_t s = 0;
    for (;;) {
      if (stopAt && (*stopAt)[s]) break;
      const LtsEdge* step = nullptr;
      for (const auto* e : lab.out(s))
        if (sat[e->dst]) {
          step = e;
          break;
        }
      if (!step) break;
      v.witness.emplace_back(step->src, step->label, step->dst);
      s = step->dst;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// .prop files

namespace {

class PropParser {
 public:
  PropParser(std::string_view text, bool literalAg) : s_(text), literalAg_(literalAg) {}

  std::vector<Property> parse() {
    std::vector<Property> out;
    skip();
    while (i_ < s_.size()) {
      expectWord("prop");
      std::string name = ident("property name");
      for (const auto& p : out)
        if (p.name == name) err("duplicate property '" + name + "'");
      expectSym("=");
      out.push_back({std::move(name), formula()});
      skip();
    }
    if (out.empty()) err("no properties found");
    return out;
  }

 private:
  [[noreturn]] void err(const std::string& msg) { throw ParseError(msg, {line_, col_}); }

  void adv() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) adv();
      if (i_ + 1 < s_.size() && s_[i_] == '/' && s_[i_ + 1] == '/') {
        while (i_ < s_.size() && s_[i_] != '\n') adv();
        continue;
      }
      return;
    }
  }

  bool peekWord(std::string_view w) {
    skip();
    if (s_.substr(i_).substr(0, w.size()) != w) return false;
    std::size_t j = i_ + w.size();
    if (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
      return false;
    return true;
  }

  bool acceptWord(std::string_view w) {
    if (!peekWord(w)) return false;
    for (std::size_t k = 0; k < w.size(); ++k) adv();
    return true;
  }

  void expectWord(std::string_view w) {
    if (!acceptWord(w)) err("expected '" + std::string(w) + "'");
  }

  bool acceptSym(std::string_view w) {
    skip();
    if (s_.substr(i_).substr(0, w.size()) != w) return false;
    for (std::size_t k = 0; k < w.size(); ++k) adv();
    return true;
  }

  void expectSym(std::string_view w) {
    if (!acceptSym(w)) err("expected '" + std::string(w) + "'");
  }

  std::string ident(const std::string& what) {
    skip();
    std::size_t j = i_;
    while (j < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
      ++j;
    if (j == i_ || std::isdigit(static_cast<unsigned char>(s_[i_])))
      err("expected " + what);
    std::string out(s_.substr(i_, j - i_));
    while (i_ < j) adv();
    return out;
  }

  FormulaPtr formula() {
    FormulaPtr f = andLevel();
    while (acceptSym("||")) f = orF(f, andLevel());
    return f;
  }

  FormulaPtr andLevel() {
    FormulaPtr f = unary();
    while (acceptSym("&&")) f = andF(f, unary());
    return f;
  }

  FormulaPtr unary() {
    if (acceptSym("!")) return notF(unary());
    return primary();
  }

  FormulaPtr primary() {
    if (acceptWord("tt")) return ttF();
    if (acceptWord("ff")) return ffF();
    if (acceptWord("dead")) return deadF();
    if (acceptWord("EG")) return egF(parens());
    if (acceptWord("AG")) {
      FormulaPtr f = parens();
      return literalAg_ ? agLiteralF(f) : agF(f);
    }
    if (acceptWord("EU") || peekWord("AU")) {
      bool au = acceptWord("AU");
      expectSym("(");
      FormulaPtr a = formula();
      expectSym(",");
      FormulaPtr b = formula();
      expectSym(")");
      return au ? auF(a, b) : euF(a, b);
    }
    if (acceptWord("AX")) {
      expectSym("[");
      ProcessName q{ident("process name")};
      expectSym(".");
      Variable y{ident("variable name")};
      if (y.isSink()) err("'_' cannot appear in AX");
      expectSym("]");
      return axF(q, y, parens());
    }
    if (acceptSym("(")) {
      FormulaPtr f = formula();
      expectSym(")");
      return f;
    }
    // atom: p:(expr)
    ProcessName p{ident("a formula")};
    expectSym(":");
    expectSym("(");
    std::size_t start = i_;
    int depth = 1;
    while (i_ < s_.size() && depth > 0) {
      if (s_[i_] == '(') ++depth;
      if (s_[i_] == ')') --depth;
      if (s_[i_] == '"') {  // don't count parens inside string literals
        adv();
        while (i_ < s_.size() && s_[i_] != '"') adv();
      }
      if (depth > 0) adv();
    }
    if (depth != 0) err("unterminated atom expression");
    std::string inner(s_.substr(start, i_ - start));
    adv();  // closing paren
    try {
      return atomF(p, parseExpressionText(inner));
    } catch (const ParseError& e) {
      err(std::string("in atom: ") + e.what());
    }
  }

  FormulaPtr parens() {
    expectSym("(");
    FormulaPtr f = formula();
    expectSym(")");
    return f;
  }

  std::string_view s_;
  bool literalAg_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

}  // namespace

std::vector<Property> parseProperties(std::string_view text, bool literalAg) {
  return PropParser(text, literalAg).parse();
}

}  // namespace chor
