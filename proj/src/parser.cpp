#include "chor/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace chor {

namespace {

enum class Tok { Ident, Nat, Str, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const std::set<std::string> kKeywords = {
    "processes", "store", "channels", "capacity", "inf", "def",  "main", "skip", "tau",
    "test",      "acq",   "rel",      "if",       "else", "md5", "unit", "true", "false"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

 private:
  void error(const std::string& msg) { throw ParseError(msg, {line_, col_}); }

  int cur() const { return i_ < text_.size() ? static_cast<unsigned char>(text_[i_]) : -1; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void next() {
    for (;;) {
      while (i_ < text_.size() && std::isspace(cur())) advance();
      if (i_ + 1 < text_.size() && text_[i_] == '/' && text_[i_ + 1] == '/') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
        continue;
      }
      break;
    }
    tok_.pos = {line_, col_};
    if (i_ >= text_.size()) {
      tok_ = {Tok::End, "", tok_.pos};
      return;
    }
    int c = cur();
    if (std::isalpha(c) || c == '_') {
      std::string s;
      while (i_ < text_.size() && (std::isalnum(cur()) || cur() == '_')) {
        s += static_cast<char>(cur());
        advance();
      }
      tok_ = {Tok::Ident, s, tok_.pos};
      return;
    }
    if (std::isdigit(c)) {
      std::string s;
      while (i_ < text_.size() && std::isdigit(cur())) {
        s += static_cast<char>(cur());
        advance();
      }
      tok_ = {Tok::Nat, s, tok_.pos};
      return;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (i_ < text_.size() && cur() != '"') {
        if (cur() == '\\') {
          advance();
          if (i_ >= text_.size()) error("unterminated string literal");
        }
        if (cur() == '\n') error("newline in string literal");
        s += static_cast<char>(cur());
        advance();
      }
      if (i_ >= text_.size()) error("unterminated string literal");
      advance();
      tok_ = {Tok::Str, s, tok_.pos};
      return;
    }
    auto two = [&](const char* sym) {
      if (i_ + 1 < text_.size() && text_[i_] == sym[0] && text_[i_ + 1] == sym[1]) {
        advance();
        advance();
        tok_ = {Tok::Sym, sym, tok_.pos};
        return true;
      }
      return false;
    };
    if (two("==") || two(":=") || two("->") || two("||") || two("&&")) return;
    if (std::string("+;,:.(){}[]=~!?").find(static_cast<char>(c)) != std::string::npos) {
      advance();
      tok_ = {Tok::Sym, std::string(1, static_cast<char>(c)), tok_.pos};
      return;
    }
    error(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, bool checkUses) : lex_(text), checkUses_(checkUses) {}

  ChoreographyFile parseFile() {
    ChoreographyFile file;
    expectKeyword("processes");
    expectSym(":");
    for (;;) {
      Token t = expectIdentTok("process name");
      ProcessName p{t.text};
      if (std::find(file.processes.begin(), file.processes.end(), p) != file.processes.end())
        throw ParseError("duplicate process name '" + p.name + "'", t.pos);
      file.processes.push_back(p);
      if (!acceptSym(",")) break;
    }
    declared_.insert(file.processes.begin(), file.processes.end());
    while (peekKeyword("store")) parseStoreDecl(file);
    if (peekKeyword("channels")) parseChannelDecl(file);
    while (peekKeyword("def")) {
      take();
      Token name = expectIdentTok("definition name");
      if (defs_.count(name.text))
        throw ParseError("duplicate definition '" + name.text + "'", name.pos);
      expectSym("=");
      ProgPtr body = parseProg();
      defs_[name.text] = body;
      file.defs.emplace_back(name.text, body);
    }
    Token m = take();
    if (m.kind != Tok::Ident || m.text != "main")
      throw ParseError("expected 'main'", m.pos);
    expectSym("=");
    file.main = parseProg();
    Token end = take();
    if (end.kind != Tok::End) throw ParseError("trailing input after main program", end.pos);
    file.defaultCapacity = defaultCap_;
    file.capacityOverrides = capOverrides_;
    file.stores = stores_;
    return file;
  }

  ProgPtr parseStandaloneProg() {
    ProgPtr p = parseProg();
    expectEnd();
    return p;
  }

  ExprPtr parseStandaloneExpr() {
    ExprPtr e = parseExpr();
    expectEnd();
    return e;
  }

  void expectEnd() {
    Token t = take();
    if (t.kind != Tok::End) throw ParseError("trailing input", t.pos);
  }

  ProgPtr parseProg() {
    ProgPtr left = parseSeq();
    std::string op;
    while (peekSym("+") || peekSym("||")) {
      Token t = take();
      if (!op.empty() && t.text != op)
        throw ParseError("mixing '+' and '||' requires parentheses", t.pos);
      op = t.text;
      ProgPtr right = parseSeq();
      left = op == "+" ? choiceProg(left, right) : parProg(left, right);
    }
    return left;
  }

 private:
  void parseStoreDecl(ChoreographyFile& file) {
    take();  // store
    Token t = expectIdentTok("process name");
    ProcessName p{t.text};
    requireDeclared(p, t.pos);
    auto& entries = stores_[p];
    expectSym("{");
    while (!acceptSym("}")) {
      Token v = expectIdentTok("variable name");
      if (v.text == "_") throw ParseError("'_' cannot be a store key", v.pos);
      Variable var{v.text};
      for (auto& [x, _] : entries)
        if (x == var)
          throw ParseError("variable '" + var.name + "' initialized twice in store of '" +
                               p.name + "'",
                           v.pos);
      expectSym("=");
      entries.emplace_back(var, parseValueLiteral());
      acceptSym(";");
    }
  }

  void parseChannelDecl(ChoreographyFile& /*file*/) {
    take();  // channels
    expectSym("{");
    expectKeyword("capacity");
    expectSym("=");
    Token t = take();
    if (t.kind == Tok::Ident && t.text == "inf") {
      defaultCap_.reset();
    } else if (t.kind == Tok::Nat) {
      defaultCap_ = std::stoull(t.text);
    } else {
      throw ParseError("expected 'inf' or a natural number", t.pos);
    }
    while (acceptSym(";")) {
      if (peekSym("}")) break;
      Token a = expectIdentTok("process name");
      expectSym("->");
      Token b = expectIdentTok("process name");
      ProcessName pa{a.text}, pb{b.text};
      requireDeclared(pa, a.pos);
      requireDeclared(pb, b.pos);
      expectSym(":");
      Token n = take();
      if (n.kind != Tok::Nat) throw ParseError("expected a natural number", n.pos);
      capOverrides_[channel(pa, pb, a.pos)] = std::stoull(n.text);
    }
    expectSym("}");
  }

  ProgPtr parseSeq() {
    std::vector<ProgPtr> atoms;
    atoms.push_back(parseAtom());
    while (acceptSym(";")) atoms.push_back(parseAtom());
    ProgPtr out = atoms.back();
    for (auto it = atoms.rbegin() + 1; it != atoms.rend(); ++it) out = seqProg(*it, out);
    return out;
  }

  ProgPtr parseAtom() {
    Token t = peekTok();
    if (acceptSym("(")) {
      ProgPtr p = parseProg();
      expectSym(")");
      return p;
    }
    if (t.kind != Tok::Ident) throw ParseError("expected a program atom", t.pos);
    if (t.text == "skip") {
      take();
      return oneProg();
    }
    if (t.text == "tau") {
      take();
      return actProg(Action::tau());
    }
    if (t.text == "test") {
      take();
      Token pt = expectIdentTok("process name");
      ProcessName p{pt.text};
      requireDeclared(p, pt.pos);
      expectSym(".");
      expectSym("(");
      ExprPtr e = parseExpr();
      expectSym(")");
      return actProg(Action::test(p, e));
    }
    if (t.text == "if") return parseIf();
    // ident-led atoms: acq/rel, comm, assign, send/recv, def reference
    Token id = take();
    ProcessName p{id.text};
    if (peekTok().kind == Tok::Ident &&
        (peekTok().text == "acq" || peekTok().text == "rel")) {
      bool isAcq = take().text == "acq";
      Token qt = expectIdentTok("process name");
      ProcessName q{qt.text};
      requireDeclared(p, id.pos);
      requireDeclared(q, qt.pos);
      expectSym(".");
      std::vector<Variable> ys;
      if (acceptSym("[")) {
        do {
          ys.push_back(parseVar());
        } while (acceptSym(","));
        expectSym("]");
      } else {
        ys.push_back(parseVar());
      }
      try {
        return isAcq ? expandAcq(p, q, ys) : expandRel(p, q, ys);
      } catch (const ChorError& e) {
        throw ParseError(e.what(), id.pos);
      }
    }
    if (acceptSym("->")) {
      // bare send/receive: p -> q ! E | p -> q ? y
      Token qt = expectIdentTok("process name");
      ProcessName q{qt.text};
      requireDeclared(p, id.pos);
      requireDeclared(q, qt.pos);
      ChannelName ch = channel(p, q, id.pos);
      if (acceptSym("!")) return actProg(Action::send(ch, parseExpr()));
      expectSym("?");
      return actProg(Action::recv(ch, parseVar()));
    }
    if (acceptSym(".")) {
      requireDeclared(p, id.pos);
      ExprPtr e = parseExpr();
      if (acceptSym("->")) {
        Token qt = expectIdentTok("process name");
        ProcessName q{qt.text};
        requireDeclared(q, qt.pos);
        expectSym(".");
        Variable y = parseVar();
        try {
          return expandComm(p, e, q, y);
        } catch (const ChorError& err) {
          throw ParseError(err.what(), id.pos);
        }
      }
      expectSym(":=");
      if (e->kind != Expr::Kind::Var)
        throw ParseError("assignment target must be a variable", id.pos);
      Variable y = e->var;
      ExprPtr rhs = parseExpr();
      return actProg(Action::assign(p, y, rhs));
    }
    auto it = defs_.find(id.text);
    if (it == defs_.end()) {
      if (checkUses_)
        throw ParseError("reference to undefined def '" + id.text + "'", id.pos);
      throw ParseError("expected a program atom, got '" + id.text + "'", id.pos);
    }
    return it->second;
  }

  ProgPtr parseIf() {
    Token kw = take();  // if
    Token pt = expectIdentTok("process name");
    ProcessName p{pt.text};
    requireDeclared(p, pt.pos);
    expectSym(".");
    expectSym("(");
    ExprPtr e = parseExpr();
    expectSym(")");
    expectSym("{");
    ProgPtr thenP = parseProg();
    expectSym("}");
    expectKeyword("else");
    expectSym("{");
    ProgPtr elseP = parseProg();
    expectSym("}");
    (void)kw;
    return expandIf(p, e, thenP, elseP);
  }

  // && < == < + < unary
  ExprPtr parseExpr() { return parseAnd(); }

  ExprPtr parseAnd() {
    ExprPtr e = parseEq();
    while (acceptSym("&&")) e = andExpr(e, parseEq());
    return e;
  }

  ExprPtr parseEq() {
    ExprPtr e = parseAdd();
    while (acceptSym("==")) e = eqExpr(e, parseAdd());
    return e;
  }

  ExprPtr parseAdd() {
    ExprPtr e = parseUnary();
    while (acceptSym("+")) e = addExpr(e, parseUnary());
    return e;
  }

  ExprPtr parseUnary() {
    if (acceptSym("~")) return notExpr(parseUnary());
    return parsePrimary();
  }

  ExprPtr parsePrimary() {
    Token t = peekTok();
    if (acceptSym("(")) {
      ExprPtr e = parseExpr();
      expectSym(")");
      return e;
    }
    if (t.kind == Tok::Nat) {
      take();
      return litExpr(Value::integer(std::stoll(t.text)));
    }
    if (t.kind == Tok::Str) {
      take();
      return litExpr(Value::str(t.text));
    }
    if (t.kind == Tok::Ident) {
      take();
      if (t.text == "md5") {
        expectSym("(");
        ExprPtr e = parseExpr();
        expectSym(")");
        return md5Expr(e);
      }
      if (t.text == "unit") return litExpr(Value::unit());
      if (t.text == "true") return litExpr(Value::boolean(true));
      if (t.text == "false") return litExpr(Value::boolean(false));
      if (t.text == "acq") return litExpr(Value::acq());
      if (t.text == "rel") return litExpr(Value::rel());
      return varExpr(Variable{t.text});
    }
    throw ParseError("expected an expression", t.pos);
  }

  Value parseValueLiteral() {
    Token t = take();
    if (t.kind == Tok::Nat) return Value::integer(std::stoll(t.text));
    if (t.kind == Tok::Str) return Value::str(t.text);
    if (t.kind == Tok::Ident) {
      if (t.text == "unit") return Value::unit();
      if (t.text == "true") return Value::boolean(true);
      if (t.text == "false") return Value::boolean(false);
    }
    throw ParseError("expected a value literal", t.pos);
  }

  Variable parseVar() {
    Token t = take();
    if (t.kind != Tok::Ident) throw ParseError("expected a variable", t.pos);
    return Variable{t.text};
  }

  ChannelName channel(const ProcessName& a, const ProcessName& b, SourcePos pos) {
    try {
      return makeChannel(a, b);
    } catch (const ChorError& e) {
      throw ParseError(e.what(), pos);
    }
  }

  void requireDeclared(const ProcessName& p, SourcePos pos) {
    if (checkUses_ && !declared_.count(p))
      throw ParseError("undeclared process '" + p.name + "'", pos);
  }

  Token peekTok() { return lex_.peek(); }
  Token take() { return lex_.take(); }

  bool peekSym(const std::string& s) {
    return lex_.peek().kind == Tok::Sym && lex_.peek().text == s;
  }

  bool acceptSym(const std::string& s) {
    if (!peekSym(s)) return false;
    take();
    return true;
  }

  void expectSym(const std::string& s) {
    if (!acceptSym(s)) throw ParseError("expected '" + s + "'", lex_.peek().pos);
  }

  bool peekKeyword(const std::string& s) {
    return lex_.peek().kind == Tok::Ident && lex_.peek().text == s;
  }

  void expectKeyword(const std::string& s) {
    Token t = take();
    if (t.kind != Tok::Ident || t.text != s) throw ParseError("expected '" + s + "'", t.pos);
  }

  Token expectIdentTok(const std::string& what) {
    Token t = take();
    if (t.kind != Tok::Ident) throw ParseError("expected " + what, t.pos);
    if (kKeywords.count(t.text) && t.text != "_")
      throw ParseError("keyword '" + t.text + "' cannot be used as " + what, t.pos);
    return t;
  }

  Lexer lex_;
  bool checkUses_;
  std::set<ProcessName> declared_;
  std::map<std::string, ProgPtr> defs_;
  std::map<ProcessName, std::vector<std::pair<Variable, Value>>> stores_;
  std::optional<std::uint64_t> defaultCap_;
  std::map<ChannelName, std::uint64_t> capOverrides_;
};

}  // namespace

bool ChoreographyFile::isDeclared(const ProcessName& p) const {
  return std::find(processes.begin(), processes.end(), p) != processes.end();
}

std::vector<std::pair<ProcessName, Variable>> ChoreographyFile::uninitializedUses() const {
  std::set<std::pair<ProcessName, Variable>> used;
  auto addExprVars = [&](const ProcessName& p, const ExprPtr& e) {
    for (const auto& x : exprVariables(e)) used.insert({p, x});
  };
  std::function<void(const ProgPtr&)> walk = [&](const ProgPtr& pr) {
    if (pr->kind == Prog::Kind::Act) {
      const Action& a = pr->act;
      switch (a.kind) {
        case Action::Kind::Test: addExprVars(a.proc, a.expr); break;
        case Action::Kind::Assign:
          addExprVars(a.proc, a.expr);
          if (!a.var.isSink()) used.insert({a.proc, a.var});
          break;
        case Action::Kind::Send: addExprVars(a.chan.from, a.expr); break;
        case Action::Kind::Recv:
          if (!a.var.isSink()) used.insert({a.chan.to, a.var});
          break;
        case Action::Kind::Tau: break;
      }
    } else if (pr->kind != Prog::Kind::One) {
      walk(pr->l);
      walk(pr->r);
    }
  };
  if (main) walk(main);
  std::vector<std::pair<ProcessName, Variable>> out;
  for (const auto& [p, x] : used) {
    auto it = stores.find(p);
    bool found = false;
    if (it != stores.end())
      for (const auto& [v, _] : it->second)
        if (v == x) found = true;
    if (!found) out.emplace_back(p, x);
  }
  return out;
}

ChoreographyFile parseChoreography(std::string_view text) {
  return Parser(text, /*checkUses=*/true).parseFile();
}

ProgPtr parseProgramText(std::string_view text) {
  return Parser(text, /*checkUses=*/false).parseStandaloneProg();
}

ExprPtr parseExpressionText(std::string_view text) {
  return Parser(text, /*checkUses=*/false).parseStandaloneExpr();
}

namespace {

std::string renderProgRec(const ProgPtr& p);

std::string renderAtomConcrete(const Action& a) {
  switch (a.kind) {
    case Action::Kind::Tau: return "tau";
    case Action::Kind::Test: return "test " + a.proc.name + ".(" + renderExpr(a.expr) + ")";
    case Action::Kind::Assign:
      return a.proc.name + "." + a.var.name + " := " + renderExpr(a.expr);
    case Action::Kind::Send:
      return a.chan.from.name + " -> " + a.chan.to.name + " ! " + renderExpr(a.expr);
    case Action::Kind::Recv:
      return a.chan.from.name + " -> " + a.chan.to.name + " ? " + a.var.name;
  }
  return "?";
}

std::string renderChild(const ProgPtr& c, bool parens) {
  std::string s = renderProgRec(c);
  return parens ? "(" + s + ")" : s;
}

std::string renderProgRec(const ProgPtr& p) {
  switch (p->kind) {
    case Prog::Kind::One: return "skip";
    case Prog::Kind::Act: return renderAtomConcrete(p->act);
    case Prog::Kind::Seq: {
      bool lp = p->l->kind == Prog::Kind::Seq || p->l->kind == Prog::Kind::Choice ||
                p->l->kind == Prog::Kind::Par;
      bool rp = p->r->kind == Prog::Kind::Choice || p->r->kind == Prog::Kind::Par;
      return renderChild(p->l, lp) + " ; " + renderChild(p->r, rp);
    }
    case Prog::Kind::Choice:
    case Prog::Kind::Par: {
      const char* op = p->kind == Prog::Kind::Choice ? " + " : " || ";
      Prog::Kind other = p->kind == Prog::Kind::Choice ? Prog::Kind::Par : Prog::Kind::Choice;
      bool lp = p->l->kind == other;
      bool rp = p->r->kind == Prog::Kind::Choice || p->r->kind == Prog::Kind::Par;
      return renderChild(p->l, lp) + op + renderChild(p->r, rp);
    }
  }
  return "?";
}

}  // namespace

std::string renderProgram(const ProgPtr& p) { return renderProgRec(p); }

}  // namespace chor
