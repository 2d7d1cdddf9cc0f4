#pragma once

#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "chor/statespace.hpp"

namespace chor {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Core connectives only; surface shorthands (ff, ||, AG, AU) are expanded by
// the property parser.
struct Formula {
  enum class Kind { True, Not, And, EG, EU, Atom, AXvar, Dead };
  Kind kind = Kind::True;
  FormulaPtr l, r;   // Not/EG/AXvar use l; And/EU use both
  ProcessName proc;  // Atom subject / AXvar process
  Variable var;      // AXvar variable
  ExprPtr expr;      // Atom
};

FormulaPtr ttF();
FormulaPtr notF(FormulaPtr f);
FormulaPtr andF(FormulaPtr a, FormulaPtr b);
FormulaPtr egF(FormulaPtr f);
FormulaPtr euF(FormulaPtr a, FormulaPtr b);
FormulaPtr atomF(ProcessName p, ExprPtr e);
FormulaPtr axF(ProcessName q, Variable y, FormulaPtr f);
FormulaPtr deadF();

// Shorthand expansions.
FormulaPtr ffF();
FormulaPtr orF(FormulaPtr a, FormulaPtr b);
FormulaPtr agF(FormulaPtr f);         // ¬ EU(⊤, ¬φ)
FormulaPtr agLiteralF(FormulaPtr f);  // EU(⊤, ¬φ), for comparison only
FormulaPtr auF(FormulaPtr a, FormulaPtr b);

std::string renderFormula(const FormulaPtr& f);
std::vector<ProcessName> formulaProcesses(const FormulaPtr& f);

struct Verdict {
  bool holds = false;
  // (src, label, dst) edges: a violating path for a refuted AG-shaped
  // property, a satisfying path for an established existential one.
  std::vector<std::tuple<std::uint32_t, std::string, std::uint32_t>> witness;
};

// Bottom-up satisfaction over a system LTS explored with state payloads.
Verdict check(const Lts& l, const FormulaPtr& f);

struct Property {
  std::string name;
  FormulaPtr formula;
};

// Parses a .prop file. literalAg switches AG to the uncorrected expansion.
std::vector<Property> parseProperties(std::string_view text, bool literalAg = false);

}  // namespace chor
