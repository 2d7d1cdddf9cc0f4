#include "doctest.h"

#include "chor/checker.hpp"
#include "chor/parser.hpp"
#include "oracles.hpp"

using namespace chor;

namespace {
const ProcessName a{"a"}, b{"b"}, c{"c"};
const Variable x{"x"}, y{"y"}, hashv{"hash"};

ProgPtr manualGab() {
  return seqProg(expandComm(a, litExpr(Value::str("foo")), b, x),
                 seqProg(actProg(Action::assign(a, hashv, md5Expr(litExpr(Value::str("foo"))))),
                         expandComm(a, varExpr(hashv), b, y)));
}
}  // namespace

TEST_CASE("gab corpus file parses to the expected 5-action sequence") {
  ChoreographyFile f = oracle::loadCorpus("gab");
  CHECK(actionCount(f.main) == 5);
  CHECK(progEqual(f.main, manualGab()));
  CHECK(f.processes == std::vector<ProcessName>{a, b});
  CHECK(!f.defaultCapacity.has_value());  // unbounded by default
  CHECK(f.uninitializedUses().empty());
}

TEST_CASE("main = skip parses to the unit program") {
  ChoreographyFile f = parseChoreography("processes: a\nmain = skip");
  CHECK(progEqual(f.main, oneProg()));
  CHECK(actionCount(f.main) == 0);
}

TEST_CASE("v2 parses to a par of two 11-action branches") {
  ChoreographyFile f = oracle::loadCorpus("v2");
  REQUIRE(f.main->kind == Prog::Kind::Par);
  CHECK(actionCount(f.main->l) == 11);  // 4 acq + 5 body + 2 rel
  CHECK(actionCount(f.main->r) == 11);
  ProgPtr manual =
      parProg(seqProg(expandAcq(a, b, {x}), seqProg(manualGab(), expandRel(a, b, {x}))),
              seqProg(expandAcq(c, b, {x}),
                      seqProg(seqProg(expandComm(c, litExpr(Value::str("bar")), b, x),
                                      seqProg(actProg(Action::assign(
                                                  c, hashv, md5Expr(litExpr(Value::str("bar"))))),
                                              expandComm(c, varExpr(hashv), b, y))),
                              expandRel(c, b, {x}))));
  CHECK(progEqual(f.main, manual));
}

TEST_CASE("round-trip on every corpus file") {
  for (const char* name : {"gab", "v1", "v2", "v3", "v4", "v5", "deadlock2"}) {
    INFO("corpus: ", name);
    ChoreographyFile f = oracle::loadCorpus(name);
    ProgPtr again = parseProgramText(renderProgram(f.main));
    CHECK(progEqual(f.main, again));
  }
}

TEST_CASE("render/parse round-trip preserves tricky shapes") {
  for (const char* text : {
           "skip",
           "tau",
           "(tau ; tau) ; tau",
           "tau ; tau ; tau",
           "(tau + tau) + skip",
           "tau + (tau + skip)",
           "(tau + tau) || (tau ; tau)",
           "a.x := 1 ; (a.x := 2 + 3 || test a.(x == 1))",
           "a -> b ! \"foo\" ; a -> b ? _",
       }) {
    CAPTURE(text);
    ProgPtr p = parseProgramText(text);
    CHECK(progEqual(p, parseProgramText(renderProgram(p))));
  }
}

TEST_CASE("documented error cases are rejected with positions") {
  auto fails = [](const std::string& text) {
    CHECK_THROWS_AS(parseChoreography(text), ParseError);
  };
  fails("processes: a\nmain = a.1 -> b.x");           // undeclared process
  fails("processes: a, b\nmain = a.1 -> a.x");        // sender = receiver
  fails("processes: a\nmain = G");                    // undefined def
  fails("processes: a\nstore a { _ = 0 }\nmain = skip");  // sink as store key
  fails("processes: a\nstore a { x = 0 x = 1 }\nmain = skip");  // duplicate init
  fails("processes: a, b\nmain = a acq b._");         // sink acq target
  fails("processes: a, b\nmain = tau + tau || tau");  // mixing + and ||
  fails("processes: a, a\nmain = skip");              // duplicate process
  fails("processes: a\nmain = skip extra");           // trailing input
  fails("processes: a\nmain = a.x := ");              // truncated
}

TEST_CASE("parse error positions point at the offending line") {
  try {
    parseChoreography("processes: a, b\nmain = a.1 -> a.x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos.line == 2);
  }
}

TEST_CASE("defs are transparent and must be declared before use") {
  ChoreographyFile f = parseChoreography(
      "processes: a\ndef A = a.x := 1\ndef B = A ; A\nmain = B");
  CHECK(actionCount(f.main) == 2);
  CHECK_THROWS_AS(parseChoreography("processes: a\ndef B = A\ndef A = a.x := 1\nmain = B"),
                  ParseError);
}

TEST_CASE("channel declarations set capacities") {
  ChoreographyFile f = parseChoreography(
      "processes: a, b\nchannels { capacity = 1; a -> b : 3 }\nmain = skip");
  REQUIRE(f.defaultCapacity.has_value());
  CHECK(*f.defaultCapacity == 1);
  CHECK(f.capacityOverrides.at(makeChannel(a, b)) == 3);
  ChoreographyFile g =
      parseChoreography("processes: a\nchannels { capacity = inf }\nmain = skip");
  CHECK(!g.defaultCapacity.has_value());
}

TEST_CASE("uninitialized uses are reported") {
  ChoreographyFile f =
      parseChoreography("processes: a, b\nstore a { x = 0 }\nmain = a.x -> b.q");
  auto uses = f.uninitializedUses();
  REQUIRE(uses.size() == 1);
  CHECK(uses[0].first == b);
  CHECK(uses[0].second == Variable{"q"});
}

TEST_CASE("if expands to a guarded choice") {
  ChoreographyFile f = parseChoreography(
      "processes: a\nstore a { x = 1 }\nmain = if a.(x == 1) { a.x := 2 } else { skip }");
  REQUIRE(f.main->kind == Prog::Kind::Choice);
  CHECK(f.main->l->l->act.kind == Action::Kind::Test);
  CHECK(f.main->r->l->act.expr->kind == Expr::Kind::Not);
}

TEST_CASE("expression precedence: ~ over + over == over &&") {
  ProgPtr p = parseProgramText("test a.(1 + 2 == 3 && ~false)");
  const ExprPtr& e = p->act.expr;
  REQUIRE(e->kind == Expr::Kind::And);
  CHECK(e->lhs->kind == Expr::Kind::Eq);
  CHECK(e->lhs->lhs->kind == Expr::Kind::Add);
  CHECK(e->rhs->kind == Expr::Kind::Not);
}

TEST_CASE("formula grammar: AG(!dead) reaches core form") {
  auto props = parseProperties("prop p = AG(!dead)");
  REQUIRE(props.size() == 1);
  CHECK(props[0].name == "p");
  CHECK(renderFormula(props[0].formula) == "!EU(tt,!!dead)");
}

TEST_CASE("formula grammar: tt, ff and precedence") {
  auto props = parseProperties("prop q = tt && ff || !tt");
  // ! > && > ||, and || is sugar
  CHECK(renderFormula(props[0].formula) == "!(!(tt && !tt) && !!tt)");
}

TEST_CASE("the isolation property file parses to core connectives") {
  auto props = parseProperties(oracle::slurpFile(std::string(PROPS_DIR) + "/iso.prop"));
  REQUIRE(props.size() == 1);
  CHECK(props[0].name == "iso");
  std::string core = renderFormula(props[0].formula);
  CHECK(core.find("AG") == std::string::npos);  // fully expanded
  CHECK(core.find("AU") == std::string::npos);
  CHECK(core.find("AX[b.x]") != std::string::npos);
  CHECK(core.find("b:(md5(x) == y)") != std::string::npos);
  auto procs = formulaProcesses(props[0].formula);
  CHECK(procs == std::vector<ProcessName>{b});
}

TEST_CASE("formula error cases") {
  CHECK_THROWS_AS(parseProperties("prop p = AG(dead"), ParseError);
  CHECK_THROWS_AS(parseProperties("prop p = AX[b._](tt)"), ParseError);
  CHECK_THROWS_AS(parseProperties(""), ParseError);
  CHECK_THROWS_AS(parseProperties("prop p = tt prop p = tt"), ParseError);
  CHECK_THROWS_AS(parseProperties("prop p = b:(1 +)"), ParseError);
}

TEST_CASE("literal AG expansion is exposed behind a flag") {
  auto lit = parseProperties("prop p = AG(dead)", /*literalAg=*/true);
  CHECK(renderFormula(lit[0].formula) == "EU(tt,!dead)");
}
