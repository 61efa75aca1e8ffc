#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwb/cube.hpp"
#include "pwb/fibration.hpp"
#include "pwb/instance.hpp"
#include "pwb/interp.hpp"
#include "pwb/rgalg.hpp"
#include "pwb/systemf.hpp"

#ifndef PWB_VERSION
#define PWB_VERSION "dev"
#endif

using namespace pwb;

namespace {

struct Global {
  std::string universe;
  std::string policy = "rey";
  int bound = 2;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::string json;
  bool timing = false;
};

// Type expressions whose subterms make up the functor pool of the fibration and cube suites.
const std::vector<std::string> kPoolTypes = {
    "forall a. a -> a",
    "forall a. a -> a -> a",
    "forall a. (a -> a) -> a -> a",
    "forall a. forall b. a * b -> b * a",
    "unit",
    "(forall a. a -> a) -> (forall a. a -> a)",
};

fib::ProbeUniverse base_universe(const Global& g) {
  fm::Policy p = fm::parse_policy(g.policy);
  if (g.universe.empty()) return fib::default_universe(p);
  auto u = fib::load_universe(g.universe);
  u.policy = p;
  u.finish();
  return u;
}

std::vector<sf::Type> pool_types(const std::string& corpus) {
  std::vector<sf::Type> ts;
  if (corpus.empty()) {
    for (const auto& s : kPoolTypes) ts.push_back(sf::parse_type(s));
  } else {
    for (const auto& d : sf::load_program(corpus)) ts.push_back(sf::type_of(d.term));
  }
  return ts;
}

int emit(const Global& g, const std::string& command, const std::string& universe, const Report& r) {
  std::ofstream file;
  if (!g.json.empty()) {
    file.open(g.json);
    if (!file) {
      std::cerr << "pwb: cannot write " << g.json << "\n";
      return 2;
    }
  }
  std::ostream& out = g.json.empty() ? std::cout : file;
  Json head{{"tool", "pwb"}, {"version", PWB_VERSION}, {"command", command}, {"universe", universe}};
  out << head.dump() << "\n";
  for (const auto& rec : r.records()) out << to_json(rec, g.timing).dump() << "\n";

  auto pass = r.count(Status::Pass), fail = r.count(Status::Fail), skip = r.count(Status::Skip);
  std::cerr << command << ": " << pass << " pass, " << fail << " fail, " << skip << " skip\n";
  for (const auto& rec : r.records()) {
    if (rec.status == Status::Pass) continue;
    std::cerr << "  " << to_string(rec.status) << " " << rec.law;
    if (!rec.detail.empty()) std::cerr << " (" << rec.detail << ")";
    if (rec.status == Status::Fail && !rec.counterexample.is_null()) std::cerr << " " << rec.counterexample.dump();
    std::cerr << "\n";
  }
  return fail == 0 ? 0 : 1;
}

// ---- commands

Report cmd_check(const std::string& path) {
  Report r;
  std::vector<sf::Definition> prog;
  try {
    prog = sf::load_program(path);
  } catch (const sf::SyntaxError& e) {
    r.fail("check.parse", "syntax", {{"file", path}, {"line", e.pos.line}, {"column", e.pos.col}, {"error", e.what()}});
    return r;
  }
  for (const auto& d : prog) {
    try {
      sf::Type actual = sf::type_of(d.term);
      bool ok = sf::type_equal(actual, d.declared);
      r.check(ok, "check.typecheck", "typing",
              {{"definition", d.name}, {"line", d.line}, {"expected", sf::pretty(d.declared)}, {"actual", sf::pretty(actual)}},
              d.name);
    } catch (const sf::TypeError& e) {
      r.fail("check.typecheck", "typing",
             {{"definition", d.name}, {"line", d.line}, {"expected", sf::pretty(d.declared)}, {"error", e.what()},
              {"code", sf::to_string(e.code)}},
             d.name);
    }
  }
  return r;
}

Report cmd_laws(const Global& g, const std::string& suite, const std::string& corpus, std::string& universe) {
  fm::Policy p = fm::parse_policy(g.policy);
  if (suite == "rgalg") {
    auto inst = fm::build_instance(p, g.bound);
    universe = "finite carriers <= " + std::to_string(g.bound) + ", policy " + g.policy;
    Report r = rg::validate_rg(*inst->cat, inst->iso);
    rg::LawSuiteOptions opt;
    opt.seed = g.seed;
    if (g.samples) opt.samples = g.samples;
    r.append(rg::law_suite(fm::functor_pool(*inst), inst->iso, opt));
    return r;
  }
  if (suite == "finmodel") {
    universe = "finite carriers <= " + std::to_string(g.bound) + ", policy " + g.policy;
    return fm::finmodel_suite(p, g.bound);
  }
  auto u = std::make_shared<const fib::ProbeUniverse>(base_universe(g));
  universe = u->summary();
  fib::Model m(u);
  auto pool = fib::corpus_functors(pool_types(corpus), 2);
  if (suite == "fibration") {
    fib::FibrationOptions opt;
    opt.seed = g.seed;
    if (g.samples) opt.samples = g.samples;
    return fib::fibration_suite(m, pool, opt);
  }
  if (suite == "cube") {
    cube::CubeOptions opt;
    opt.bound = g.bound;
    opt.seed = g.seed;
    if (g.samples) opt.samples = g.samples;
    return cube::cube_suite(m, pool, opt);
  }
  throw Error("unknown suite '" + suite + "'");
}

Report cmd_interp(const Global& g, const std::string& path, std::string& universe) {
  Report r;
  auto prog = sf::load_program(path);
  auto cl = fib::universe_closure(prog, base_universe(g), 16);
  universe = cl.universe.summary();
  if (!cl.closed) {
    r.skip("interp.closure", "closure", cl.reason);
    return r;
  }
  fib::Model m(std::make_shared<const fib::ProbeUniverse>(cl.universe));
  return interp::interp_suite(m, prog);
}

Report cmd_freethm(const Global& g, const std::string& path, const std::string& name, const std::string& carriers,
                   const std::string& relations, std::string& universe) {
  auto prog = sf::load_program(path);
  const sf::Definition* def = nullptr;
  for (const auto& d : prog)
    if (d.name == name) def = &d;
  if (!def) throw Error("no definition named '" + name + "' in " + path);
  sf::Type ty = sf::type_of(def->term);

  interp::FreeThmOptions opt;
  if (!carriers.empty()) opt.carriers = interp::parse_carriers(carriers);
  if (!relations.empty()) {
    std::ifstream in(relations);
    if (!in) throw Error("cannot read " + relations);
    Json j = Json::parse(in);
    if (!j.is_array()) j = Json::array({j});
    for (const auto& x : j) opt.relations.push_back(fm::rel_from_json(x));
  }

  Report r;
  auto ft = interp::free_theorem_check(def->term, ty, prog, opt);
  r.append(ft.report);
  if (ft.verdict == "skip")
    r.skip("freethm.verdict", "free_theorem", name + ": skip");
  else
    r.check(ft.verdict != "fail", "freethm.verdict", "free_theorem", {{"definition", name}}, name + ": " + ft.verdict);

  // singleton relations {(a,a)} on the small carriers unless relations were given
  std::vector<fm::Rel> focus = opt.relations;
  if (focus.empty())
    for (int k : opt.carriers) {
      if (k > 3) continue;
      fm::FinSet a = fm::FinSet::atoms(k);
      for (const auto& x : a.elements()) focus.push_back(fm::Rel::from_pairs(a, a, {{x, x}}));
    }
  auto seed = interp::extend_universe(base_universe(g), focus);
  auto cl = fib::universe_closure(prog, seed, 16);
  universe = cl.universe.summary();
  if (!cl.closed) {
    r.skip("interp.closure", "closure", "erased check only: " + cl.reason);
    return r;
  }
  fib::Model m(std::make_shared<const fib::ProbeUniverse>(cl.universe));
  r.append(interp::abstraction_check(m, def->term, ty, focus));
  r.append(interp::iel_check(m, ty));
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametricity workbench: law suites and free theorems over finite models"};
  app.set_version_flag("--version", std::string(PWB_VERSION));
  app.require_subcommand(1);
  Global g;
  app.add_option("--universe", g.universe, "probe universe JSON file")->check(CLI::ExistingFile);
  app.add_option("--policy", g.policy, "iso selection policy")
      ->check(CLI::IsMember({"strict", "rey", "crey"}));
  app.add_option("--bound", g.bound, "largest carrier size")->check(CLI::Range(1, 4));
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--samples", g.samples, "samples per randomized law");
  app.add_option("--json", g.json, "write the JSON-lines report to this file");
  app.add_flag("--timing", g.timing, "include timings in the report");

  std::string file, suite, corpus, name, carriers, relations;
  auto* check = app.add_subcommand("check", "typecheck every definition of a program");
  check->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* laws = app.add_subcommand("laws", "run a law suite");
  laws->add_option("--suite", suite)->required()->check(CLI::IsMember({"rgalg", "finmodel", "fibration", "cube"}));
  laws->add_option("--corpus", corpus, "program whose types seed the functor pool")->check(CLI::ExistingFile);

  auto* interp_cmd = app.add_subcommand("interp", "interpretation checks for every definition of a program");
  interp_cmd->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* freethm = app.add_subcommand("freethm", "free theorem, abstraction and identity extension for one term");
  freethm->add_option("file", file)->required()->check(CLI::ExistingFile);
  freethm->add_option("--name", name)->required();
  freethm->add_option("--carriers", carriers, "carrier sizes, e.g. 3 or 1,2 or 1-4");
  freethm->add_option("--relations", relations, "JSON file with relations")->check(CLI::ExistingFile);

  for (auto* sub : {check, laws, interp_cmd, freethm}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    std::string universe = "none";
    if (*check) return emit(g, "check", universe, cmd_check(file));
    if (*laws) {
      Report r = cmd_laws(g, suite, corpus, universe);
      return emit(g, "laws " + suite, universe, r);
    }
    if (*interp_cmd) {
      Report r = cmd_interp(g, file, universe);
      return emit(g, "interp", universe, r);
    }
    if (*freethm) {
      Report r = cmd_freethm(g, file, name, carriers, relations, universe);
      return emit(g, "freethm " + name, universe, r);
    }
  } catch (const sf::SyntaxError& e) {
    std::cerr << "pwb: syntax error at " << e.pos.line << ":" << e.pos.col << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pwb: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
