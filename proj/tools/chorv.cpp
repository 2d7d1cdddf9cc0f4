#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chor/checker.hpp"
#include "chor/equivalence.hpp"
#include "chor/parser.hpp"
#include "chor/projection.hpp"
#include "chor/semantics.hpp"
#include "chor/statespace.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw chor::ChorError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

chor::ChoreographyFile loadChor(const std::string& path) {
  try {
    return chor::parseChoreography(slurp(path));
  } catch (const chor::ParseError& e) {
    throw chor::ChorError(path + ":" + e.what());
  }
}

void warnUninitialized(const chor::ChoreographyFile& f) {
  for (const auto& [p, x] : f.uninitializedUses())
    std::cerr << "warning: " << p.name << "." << x.name << " is used but not initialized\n";
}

int cmdParse(const std::string& path) {
  chor::ChoreographyFile f = loadChor(path);
  warnUninitialized(f);
  std::cout << chor::renderProgram(f.main) << "\n";
  std::cout << "processes:";
  for (const auto& p : f.processes) std::cout << " " << p.name;
  std::cout << "\nvariables:";
  for (const auto& [p, vars] : f.stores)
    for (const auto& [x, v] : vars) std::cout << " " << p.name << "." << x.name;
  std::cout << "\nactions: " << chor::actionCount(f.main) << "\n";
  return 0;
}

int cmdProject(const std::string& path, const std::string& role) {
  chor::ChoreographyFile f = loadChor(path);
  std::vector<chor::ProcessName> roles;
  if (role.empty()) {
    roles = f.processes;
  } else {
    chor::ProcessName r{role};
    if (!f.isDeclared(r)) throw chor::ChorError("unknown role: " + role);
    roles.push_back(r);
  }
  for (const auto& r : roles)
    std::cout << r.name << ": " << chor::renderProgram(chor::project(f.main, r)) << "\n";
  return 0;
}

int cmdLts(const std::string& path, bool local, const std::string& format, std::size_t limit,
           bool stats) {
  chor::ChoreographyFile f = loadChor(path);
  chor::ExploreOptions opts;
  opts.limit = limit;
  opts.keepStates = false;
  chor::Lts l = chor::exploreSystem(chor::initialState(f, local), chor::contextOf(f), opts);
  if (stats) {
    std::size_t dead = 0;
    for (auto d : l.dead) dead += d;
    std::cout << "states: " << l.numStates << "\nedges: " << l.edges.size()
              << "\ndead: " << dead << "\n";
    return 0;
  }
  if (format == "aut")
    std::cout << chor::exportAut(l);
  else if (format == "dot")
    std::cout << chor::exportDot(l);
  else
    std::cout << chor::exportJson(l);
  return 0;
}

void printTrace(const std::vector<std::string>& labels) {
  std::cout << "TRACE:";
  for (const auto& l : labels) std::cout << " " << l;
  std::cout << "\n";
}

int cmdEquiv(const std::string& path, std::size_t limit) {
  chor::ChoreographyFile f = loadChor(path);
  chor::ExploreOptions opts;
  opts.limit = limit;
  chor::BisimResult r = chor::checkOperationalEquivalence(f.main, f.processes, opts);
  if (r.equivalent) {
    std::cout << "EQUIVALENT\n";
    return 0;
  }
  std::cout << "NOT EQUIVALENT\n";
  if (!r.trace.empty()) printTrace(r.trace);
  return 1;
}

int cmdCheck(const std::string& path, const std::string& propsPath, const std::string& side,
             bool literalAg, std::size_t limit) {
  chor::ChoreographyFile f = loadChor(path);
  std::vector<chor::Property> props;
  try {
    props = chor::parseProperties(slurp(propsPath), literalAg);
  } catch (const chor::ParseError& e) {
    throw chor::ChorError(propsPath + ":" + e.what());
  }
  for (const auto& pr : props)
    for (const auto& p : chor::formulaProcesses(pr.formula))
      if (!f.isDeclared(p))
        throw chor::ChorError("property '" + pr.name + "' references undeclared process '" +
                              p.name + "'");
  bool local = side == "local";
  if (side == "auto") {
    chor::ExploreOptions eo;
    eo.limit = limit;
    if (!chor::checkOperationalEquivalence(f.main, f.processes, eo).equivalent) {
      std::cerr << "warning: projections are not equivalent to the global program; "
                   "checking the local system\n";
      local = true;
    }
  }
  chor::ExploreOptions opts;
  opts.limit = limit;
  chor::Lts l = chor::exploreSystem(chor::initialState(f, local), chor::contextOf(f), opts);
  bool allHold = true;
  for (const auto& pr : props) {
    chor::Verdict v = chor::check(l, pr.formula);
    std::cout << "PROP " << pr.name << ": " << (v.holds ? "HOLDS" : "VIOLATED") << "\n";
    allHold = allHold && v.holds;
    if (!v.witness.empty()) {
      std::cout << "TRACE:\n";
      for (const auto& [src, label, dst] : v.witness)
        std::cout << src << " -" << label << "-> " << dst << "\n";
    }
  }
  return allHold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chorv: verify choreographies with isolated transactions"};
  app.require_subcommand(1);

  std::string file, role, format = "aut", side = "global", props, checkSide = "auto";
  std::size_t limit = 1'000'000;
  bool stats = false, literalAg = false;

  auto* parse = app.add_subcommand("parse", "parse and summarize a choreography");
  parse->add_option("file", file)->required();

  auto* project = app.add_subcommand("project", "print per-role projections");
  project->add_option("file", file)->required();
  project->add_option("--role", role, "project only this role");

  auto* lts = app.add_subcommand("lts", "explore and export the system LTS");
  lts->add_option("file", file)->required();
  lts->add_option("--side", side)->check(CLI::IsMember({"global", "local"}));
  lts->add_option("--format", format)->check(CLI::IsMember({"aut", "dot", "json"}));
  lts->add_option("--limit", limit);
  lts->add_flag("--stats", stats, "print state/edge/dead counts only");

  auto* equiv = app.add_subcommand("equiv", "decide operational equivalence");
  equiv->add_option("file", file)->required();
  equiv->add_option("--limit", limit);

  auto* check = app.add_subcommand("check", "model-check properties");
  check->add_option("file", file)->required();
  check->add_option("--props", props)->required();
  check->add_option("--side", checkSide)->check(CLI::IsMember({"auto", "global", "local"}));
  check->add_option("--limit", limit);
  check->add_flag("--literal-ag", literalAg, "use the uncorrected AG expansion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) return cmdParse(file);
    if (project->parsed()) return cmdProject(file, role);
    if (lts->parsed()) return cmdLts(file, side == "local", format, limit, stats);
    if (equiv->parsed()) return cmdEquiv(file, limit);
    if (check->parsed()) return cmdCheck(file, props, checkSide, literalAg, limit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
