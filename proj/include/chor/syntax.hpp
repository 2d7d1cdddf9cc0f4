#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace chor {

// Raised for malformed constructions (bad channels, bad shorthands, ...).
struct ChorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProcessName {
  std::string name;
  auto operator<=>(const ProcessName&) const = default;
};

// Ordered channel p -> q; p != q.
struct ChannelName {
  ProcessName from;
  ProcessName to;
  auto operator<=>(const ChannelName&) const = default;
};

ChannelName makeChannel(ProcessName from, ProcessName to);

// "_" is the sink variable: writes to it are discarded, it is never a store key.
struct Variable {
  std::string name;
  bool isSink() const { return name == "_"; }
  auto operator<=>(const Variable&) const = default;
};

struct Value {
  enum class Kind { Unit, Bool, Int, Str, Acq, Rel };
  Kind kind = Kind::Unit;
  bool b = false;
  std::int64_t i = 0;
  std::string s;

  static Value unit() { return {}; }
  static Value boolean(bool v) { return {Kind::Bool, v, 0, {}}; }
  static Value integer(std::int64_t v) { return {Kind::Int, false, v, {}}; }
  static Value str(std::string v) { return {Kind::Str, false, 0, std::move(v)}; }
  static Value acq() { return {Kind::Acq, false, 0, {}}; }
  static Value rel() { return {Kind::Rel, false, 0, {}}; }

  auto operator<=>(const Value&) const = default;
};

// Renders a value the way the concrete syntax writes literals:
// unit, true, 42, "foo" (escaped), acq, rel.
std::string renderValue(const Value& v);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Var, Lit, Eq, Not, And, Add, Md5 };
  Kind kind;
  Variable var;        // Var
  Value lit;           // Lit
  ExprPtr lhs, rhs;    // Eq/And/Add (binary), Not/Md5 (lhs only)
};

ExprPtr varExpr(Variable x);
ExprPtr litExpr(Value v);
ExprPtr eqExpr(ExprPtr a, ExprPtr b);
ExprPtr notExpr(ExprPtr a);
ExprPtr andExpr(ExprPtr a, ExprPtr b);
ExprPtr addExpr(ExprPtr a, ExprPtr b);
ExprPtr md5Expr(ExprPtr a);

bool exprEqual(const ExprPtr& a, const ExprPtr& b);
std::vector<Variable> exprVariables(const ExprPtr& e);
std::string renderExpr(const ExprPtr& e);

struct Action {
  enum class Kind { Test, Assign, Send, Recv, Tau };
  Kind kind = Kind::Tau;
  ProcessName proc;  // Test subject / Assign subject
  Variable var;      // Assign target / Recv target
  ExprPtr expr;      // Test / Assign / Send
  ChannelName chan;  // Send / Recv

  static Action tau() { return {}; }
  static Action test(ProcessName p, ExprPtr e);
  static Action assign(ProcessName q, Variable y, ExprPtr e);
  static Action send(ChannelName ch, ExprPtr e);
  static Action recv(ChannelName ch, Variable y);
};

bool actionEqual(const Action& a, const Action& b);
std::optional<ProcessName> subjectOf(const Action& a);
std::optional<ChannelName> objectOf(const Action& a);
std::string renderAction(const Action& a);

// An action with every expression replaced by its evaluated value.
struct GroundAction {
  Action::Kind kind = Action::Kind::Tau;
  ProcessName proc;
  Variable var;
  Value val;  // Assign/Send/Recv payload; Test carries true implicitly
  ChannelName chan;
  auto operator<=>(const GroundAction&) const = default;
};

std::optional<ChannelName> objectOf(const GroundAction& a);
std::string renderGroundAction(const GroundAction& a);

struct Prog;
using ProgPtr = std::shared_ptr<const Prog>;

struct Prog {
  enum class Kind { One, Act, Choice, Par, Seq };
  Kind kind;
  Action act;     // Act
  ProgPtr l, r;   // Choice/Par/Seq
  int actionCount = 0;
  std::size_t hash = 0;
};

ProgPtr oneProg();
ProgPtr actProg(Action a);
ProgPtr choiceProg(ProgPtr l, ProgPtr r);
ProgPtr parProg(ProgPtr l, ProgPtr r);
ProgPtr seqProg(ProgPtr l, ProgPtr r);

// Unit-eliminating constructors, used when building reduction successors.
ProgPtr seqNorm(ProgPtr l, ProgPtr r);
ProgPtr parNorm(ProgPtr l, ProgPtr r);

bool progEqual(const ProgPtr& a, const ProgPtr& b);
int actionCount(const ProgPtr& p);
std::set<ProcessName> subjectsOf(const ProgPtr& p);
bool isGlobal(const ProgPtr& p);
bool isLocal(const ProgPtr& p);

// Shorthand expansions (concrete-syntax sugar only; the AST never holds them).
ProgPtr expandComm(const ProcessName& p, ExprPtr e, const ProcessName& q, const Variable& y);
ProgPtr expandAcq(const ProcessName& p, const ProcessName& q, const std::vector<Variable>& ys);
ProgPtr expandRel(const ProcessName& p, const ProcessName& q, const std::vector<Variable>& ys);
ProgPtr expandIf(const ProcessName& p, ExprPtr e, ProgPtr thenP, ProgPtr elseP);

}  // namespace chor
