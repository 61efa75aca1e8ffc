#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "family_oracle.hpp"
#include "pwb/cube.hpp"
#include "pwb/fibration.hpp"
#include "pwb/instance.hpp"
#include "pwb/interp.hpp"
#include "pwb/rgalg.hpp"
#include "pwb/systemf.hpp"

using namespace pwb;

namespace {

const std::string kCorpus = std::string(PWB_SOURCE_DIR) + "/corpus/";
const std::vector<std::string> kFiles = {"identity.sysf", "church.sysf", "pairs.sysf", "selfapp.sysf"};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      note = why;
    }
  }
};

// Every prefix must match at least one record, and every matching record must pass.
void require_laws(Outcome& o, const Report& r, const std::vector<std::string>& prefixes) {
  for (const auto& p : prefixes) {
    std::size_t hits = 0;
    for (const auto& rec : r.records()) {
      if (rec.law.rfind(p, 0) != 0) continue;
      ++hits;
      if (rec.status != Status::Pass) {
        std::string why = rec.law + " " + to_string(rec.status);
        if (!rec.detail.empty()) why += " (" + rec.detail + ")";
        if (!rec.counterexample.is_null()) why += " " + rec.counterexample.dump().substr(0, 300);
        o.require(false, why);
      }
    }
    o.require(hits > 0, "no records for " + p);
  }
}

std::vector<sf::Definition> load(const std::string& file) { return sf::load_program(kCorpus + file); }

std::vector<sf::Type> corpus_types() {
  std::vector<sf::Type> ts;
  for (const auto& f : kFiles)
    for (const auto& d : load(f)) ts.push_back(d.declared);
  return ts;
}

std::shared_ptr<const fib::ProbeUniverse> shared(fib::ProbeUniverse u) {
  return std::make_shared<const fib::ProbeUniverse>(std::move(u));
}

// Shared suite runs; several criteria read from the same reports.
struct Runs {
  std::shared_ptr<const fib::ProbeUniverse> universe = shared(fib::default_universe());
  fib::Model model{universe};
  std::vector<fib::TF> pool = fib::corpus_functors(corpus_types(), 2);
  std::optional<Report> fibration, cube, finmodel;

  const Report& fib_report() {
    if (!fibration) fibration = fib::fibration_suite(model, pool, fib::FibrationOptions{});
    return *fibration;
  }
  const Report& cube_report() {
    if (!cube) cube = cube::cube_suite(model, pool, cube::CubeOptions{});
    return *cube;
  }
  const Report& fm_report() {
    if (!finmodel) finmodel = fm::finmodel_suite(fm::Policy::Rey, 2);
    return *finmodel;
  }
};

Outcome criterion1() {
  Outcome o;
  auto t0 = Clock::now();
  auto prog = load("identity.sysf");
  o.require(prog.size() >= 3, "fewer than three identity variants");
  auto id_ty = sf::parse_type("forall a. a -> a");
  for (std::size_t i = 0; i < prog.size(); ++i)
    for (std::size_t j = i + 1; j < prog.size(); ++j) {
      o.require(!sf::term_equal(prog[i].term, prog[j].term), prog[i].name + " and " + prog[j].name + " coincide");
      o.require(sf::beta_eta_equal(prog[i].term, prog[j].term), prog[i].name + " and " + prog[j].name + " differ");
    }

  interp::FreeThmOptions opt;
  opt.carriers = {1, 2, 3, 4};
  // singleton relations on the carriers that keep the closed universe small
  std::vector<fm::Rel> focus;
  for (int k = 1; k <= 3; ++k) {
    fm::FinSet a = fm::FinSet::atoms(k);
    for (const auto& x : a.elements()) focus.push_back(fm::Rel::from_pairs(a, a, {{x, x}}));
  }
  auto cl = fib::universe_closure(prog, interp::extend_universe(fib::default_universe(), focus), 16);
  o.require(cl.closed, "closure: " + cl.reason);
  if (!cl.closed) return o;
  fib::Model m(shared(cl.universe));

  for (const auto& d : prog) {
    auto ty = sf::type_of(d.term);
    o.require(sf::type_equal(ty, id_ty), d.name + " is not of type forall a. a -> a");
    auto ft = interp::free_theorem_check(d.term, ty, prog, opt);
    o.require(ft.verdict == "identity", d.name + ": verdict " + ft.verdict);
    Report ab = interp::abstraction_check(m, d.term, ty, focus);
    require_laws(o, ab, {"interp.abstraction"});
  }
  double s = seconds_since(t0);
  o.require(s < 10, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion2(Runs& runs) {
  Outcome o;
  auto t0 = Clock::now();
  const auto& u = runs.model.universe();
  o.require(u.objs0.size() == 2 && u.objs1.size() <= 9, "default universe is not 2 objects / <=9 relations");
  std::size_t n = 0;
  for (const auto& ty : corpus_types()) {
    if (!sf::is_closed(ty)) continue;
    ++n;
    Report r = interp::iel_check(runs.model, ty);
    require_laws(o, r, {"interp.iel"});
  }
  o.require(n > 0, "no closed corpus types");
  double s = seconds_since(t0);
  o.require(s < 60, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (auto p : {fm::Policy::Strict, fm::Policy::Rey, fm::Policy::Crey}) {
    auto inst = fm::build_instance(p, 2);
    Report r = rg::validate_rg(*inst->cat, inst->iso);
    rg::LawSuiteOptions opt;
    opt.samples = 200;
    r.append(rg::law_suite(fm::functor_pool(*inst), inst->iso, opt));
    require_laws(o, r, {"rg."});
    o.require(r.ok(), std::string("policy ") + fm::to_string(p));
    o.require(rg::generated_map_count(*inst->cat) == 7, "generated map count is not 7");
  }
  return o;
}

Outcome criterion4(Runs& runs) {
  Outcome o;
  require_laws(o, runs.fib_report(),
               {"fib.subst.projection", "fib.subst.identity", "fib.subst.compose", "fib.subst.lazy_eager"});
  return o;
}

Outcome criterion5(Runs& runs) {
  Outcome o;
  require_laws(o, runs.fib_report(),
               {"fib.split.identity", "fib.split.compose", "fib.generic_object", "fib.bc.terminal", "fib.bc.product",
                "fib.bc.exponential"});
  return o;
}

Outcome criterion6(Runs& runs) {
  Outcome o;
  require_laws(o, runs.fm_report(),
               {"fm.eta.faces", "fm.eta.iso", "fm.eta_prod.natural", "fm.eta_exp.natural", "fm.faces.stable"});
  require_laws(o, runs.fib_report(),
               {"fib.fiber.product.beta", "fib.fiber.exponential.beta", "fib.eps.faces", "fib.faces.stable"});
  return o;
}

Outcome criterion7(Runs& runs) {
  Outcome o;
  auto t0 = Clock::now();
  for (const auto& f : kFiles) {
    auto prog = load(f);
    auto cl = fib::universe_closure(prog, fib::default_universe(), 16);
    if (!cl.closed) {
      // impredicative instantiation outside the probe universe; the fallback path is the erased checker
      if (f == "selfapp.sysf") continue;
      o.require(false, f + ": closure " + cl.reason);
      continue;
    }
    fib::Model m(shared(cl.universe));
    require_laws(o, interp::interp_suite(m, prog), {"interp.forall.roundtrip"});
  }
  require_laws(o, runs.fib_report(),
               {"fib.forall.transpose_counit", "fib.forall.counit_transpose", "fib.forall.theta"});

  auto u3 = fib::universe_upto(3);
  fib::Model m3(shared(u3));
  fib::TF a = fib::proj(1, 0);
  fib::TF endo = fib::arrow_f(a, a);
  std::size_t one = m3.eval0(fib::forall_f(endo), {}).size();
  std::size_t two = m3.eval0(fib::forall_f(fib::arrow_f(a, endo)), {}).size();
  std::size_t oracle1 = oracle::count_families(u3, 1), oracle2 = oracle::count_families(u3, 2);
  o.require(one == 1 && oracle1 == 1, "forall a. a -> a: model " + std::to_string(one) + ", oracle " +
                                          std::to_string(oracle1));
  o.require(two == 2 && oracle2 == 2, "forall a. a -> a -> a: model " + std::to_string(two) + ", oracle " +
                                          std::to_string(oracle2));
  double s = seconds_since(t0);
  o.require(s < 120, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion8(Runs& runs) {
  Outcome o;
  require_laws(o, runs.cube_report(),
               {"cube.bullet.eqh_id", "cube.bullet.eqh_eq", "cube.bullet.eqv_id", "cube.bullet.eqv_eq",
                "cube.bullet.conn_id", "cube.bullet.conn_eq", "cube.faces.eq", "cube.composites.iso",
                "cube.composites.corners", "cube.composites.natural"});
  return o;
}

Outcome criterion9(Runs& runs) {
  Outcome o;
  require_laws(o, runs.cube_report(), {"cube.eta2.faces", "cube.eta2.unique", "cube.essential_surjectivity"});
  return o;
}

// Twenty single-entry corruptions spread over four kinds of table.
Outcome criterion10(Runs& runs) {
  Outcome o;
  std::mt19937_64 rng(20);
  int detected = 0, tried = 0;
  auto note = [&](bool caught, const std::string& what) {
    ++tried;
    if (caught) ++detected;
    o.require(caught, "undetected: " + what);
  };

  auto inst = fm::build_instance(fm::Policy::Rey, 2);
  auto rg_pool = fm::functor_pool(*inst);
  for (int k = 0; k < 5; ++k) {
    rg::RgFunctorTab copy = *rg_pool[rng() % rg_pool.size()];
    auto mu = rg::mutate_eps(copy, rng);
    if (!mu.applied) {
      --k;
      continue;
    }
    Report r = rg::validate_functor(copy, inst->iso, inst->iso);
    const auto* f = r.first_failure();
    note(f && !f->counterexample.is_null(), "rg eps " + mu.where);
  }
  for (int k = 0; k < 5; ++k) {
    rg::RgNatTab copy = rg::identity_nat(rg_pool[rng() % rg_pool.size()]);
    auto mu = rg::mutate_nat(copy, rng);
    if (!mu.applied) {
      --k;
      continue;
    }
    Report r = rg::validate_nat(copy, inst->iso);
    const auto* f = r.first_failure();
    note(f && !f->counterexample.is_null(), "rg nat " + mu.where);
  }

  const auto& m = runs.model;
  std::vector<fib::TF> small;
  for (const auto& f : runs.pool)
    if (f->arity <= 1) small.push_back(f);
  int eps_done = 0;
  while (eps_done < 5) {
    const auto& f = small[rng() % small.size()];
    std::vector<fm::FinSet> env;
    if (f->arity == 1) env.push_back(m.universe().objs0[rng() % m.universe().objs0.size()]);
    auto t = interp::eps_table(m.epsilon(f, env));
    if (t.images.size() < 2 || !interp::eps_violation(t).is_null()) continue;
    std::size_t i = rng() % t.images.size();
    std::size_t w = rng() % t.target.witness_count();
    fm::Witness repl = t.target.witness_at(w);
    const auto& old = t.images[i];
    if (repl.a == old.a && repl.b == old.b && repl.w == old.w) continue;
    t.images[i] = repl;
    ++eps_done;
    note(!interp::eps_violation(t).is_null(), "eps table of " + f->key);
  }

  std::vector<fib::NatRep> reps;
  std::vector<int> arity;
  for (const auto& d : load("pairs.sysf")) {
    auto ty = sf::type_of(d.term);
    auto [open, k] = interp::open_term(d.term, ty);
    if (k != 1) continue;
    reps.push_back(interp::interp_term(open, {k, {}}));
    arity.push_back(k);
  }
  for (const auto& d : load("identity.sysf")) {
    auto [open, k] = interp::open_term(d.term, d.declared);
    reps.push_back(interp::interp_term(open, {k, {}}));
    arity.push_back(k);
  }
  int nat_done = 0;
  auto envs = fib::probe_envs(m.universe(), 1);
  while (nat_done < 5) {
    std::size_t pick = rng() % reps.size();
    const auto& rep = reps[pick];
    auto target = m.universe().objs0[rng() % m.universe().objs0.size()];
    fm::FinFn g = rep.at0(m, {target});
    if (g.cod().size() < 2 || g.dom().size() == 0) continue;
    std::size_t x = rng() % g.dom().size();
    std::uint32_t shift = 1 + static_cast<std::uint32_t>(rng() % (g.cod().size() - 1));
    auto mutated = rep;
    auto at0 = rep.at0;
    mutated.at0 = [at0, target, x, shift](const fib::Model& mm, const std::vector<fm::FinSet>& env) {
      fm::FinFn h = at0(mm, env);
      if (!(env.size() == 1 && env[0] == target)) return h;
      auto img = h.images();
      img[x] = (img[x] + shift) % static_cast<std::uint32_t>(h.cod().size());
      return fm::FinFn::from_indices(h.dom(), h.cod(), img);
    };
    ++nat_done;
    note(!fib::nat_violation(m, mutated, envs).is_null(), "component of " + rep.name);
  }
  o.require(tried == 20 && detected == 20,
            std::to_string(detected) + " of " + std::to_string(tried) + " mutations detected");
  return o;
}

}  // namespace

int main() {
  Runs runs;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"identity free theorem and abstraction", [] { return criterion1(); }},
      {"identity extension", [&] { return criterion2(runs); }},
      {"reflexive graph category laws", [] { return criterion3(); }},
      {"substitution functoriality", [&] { return criterion4(runs); }},
      {"split simply typed structure", [&] { return criterion5(runs); }},
      {"cartesian closed stability and coherence", [&] { return criterion6(runs); }},
      {"quantifier adjunction and family counts", [&] { return criterion7(runs); }},
      {"cubical degeneracies and composites", [&] { return criterion8(runs); }},
      {"level-2 extension and essential surjectivity", [&] { return criterion9(runs); }},
      {"mutation sensitivity", [&] { return criterion10(runs); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    std::ostringstream line;
    line << (o.ok ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1) << ": " << criteria[i].first;
    line << " (" << static_cast<int>(seconds_since(t0) * 1000) << " ms)";
    if (!o.ok) line << " -- " << o.note;
    std::cout << line.str() << std::endl;
    if (!o.ok) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
