#include "catch_amalgamated.hpp"

#include "family_oracle.hpp"
#include "pwb/fibration.hpp"

using namespace pwb;
using namespace pwb::fib;

namespace {

TF endo(int n) {
  TF a = proj(n, n - 1);
  return arrow_f(a, a);
}

}  // namespace

TEST_CASE("the default universe has two objects and nine relations") {
  auto u = default_universe();
  CHECK(u.objs0.size() == 2);
  CHECK(u.objs1.size() == 9);
  auto envs = probe_envs(u, 1);
  CHECK(envs.level0.size() == 2);
  CHECK(envs.level1.size() == 9);
  CHECK(probe_envs(u, 2).level1.size() == 81);
}

TEST_CASE("types become functors with the last entry innermost") {
  auto t = from_type(sf::parse_type("forall a. a -> a"), 0);
  CHECK(same(t, forall_f(arrow_f(proj(1, 0), proj(1, 0)))));
  auto open = from_type(sf::tarrow(sf::tvar(0), sf::tvar(1)), 2);
  CHECK(same(open, arrow_f(proj(2, 1), proj(2, 0))));
}

TEST_CASE("polymorphic families match the brute-force oracle") {
  SECTION("default universe") {
    auto u = default_universe();
    Model m(std::make_shared<const ProbeUniverse>(u));
    CHECK(oracle::count_families(u, 1) == 1);
    CHECK(oracle::count_families(u, 2) == 2);
    CHECK(m.eval0(forall_f(endo(1)), {}).size() == oracle::count_families(u, 1));
    CHECK(m.eval0(forall_f(arrow_f(proj(1, 0), endo(1))), {}).size() == oracle::count_families(u, 2));
  }
  SECTION("carriers up to three") {
    auto u = universe_upto(3);
    Model m(std::make_shared<const ProbeUniverse>(u));
    CHECK(oracle::count_families(u, 1) == 1);
    CHECK(oracle::count_families(u, 2) == 2);
    CHECK(m.eval0(forall_f(endo(1)), {}).size() == 1);
    CHECK(m.eval0(forall_f(arrow_f(proj(1, 0), endo(1))), {}).size() == 2);
  }
}

TEST_CASE("unit is terminal at both levels") {
  Model m(std::make_shared<const ProbeUniverse>(default_universe()));
  auto u = m.universe();
  for (const auto& r : u.objs1) CHECK(m.eval1(unit_f(1), {r}) == fm::terminal_rel());
  CHECK(m.eval0(unit_f(0), {}).size() == 1);
}

TEST_CASE("epsilon is an iso with identity faces") {
  Model m(std::make_shared<const ProbeUniverse>(default_universe()));
  std::vector<TF> fs = {endo(1), prod_f(proj(1, 0), endo(1)), forall_f(endo(1)), unit_f(1)};
  for (const auto& f : fs)
    for (const auto& a : m.universe().objs0) {
      std::vector<FinSet> env{a};
      if (f->arity == 0) env.clear();
      RelMor e = m.epsilon(f, env);
      INFO(f->key);
      CHECK(e.is_iso());
      CHECK(e.has_identity_faces());
      CHECK(e.src() == fm::eq(m.eval0(f, env)));
    }
}

TEST_CASE("reindexing is split") {
  TF x = prod_f(proj(2, 0), endo(2));
  CHECK(same(reindex(ctx_id(2), x), eager(x)));
  CtxMor f{1, 2, {proj(1, 0), endo(1)}};
  CtxMor g{2, 2, {proj(2, 1), proj(2, 0)}};
  CHECK(same(reindex(ctx_compose(g, f), x), reindex(f, reindex(g, x))));
  CHECK(same(theta_inv(theta(x)), x));
  CHECK(same(reindex(f, forall_f(proj(3, 2))), forall_f(proj(2, 1))));
}

TEST_CASE("fiber beta for products and exponentials") {
  Model m(std::make_shared<const ProbeUniverse>(default_universe()));
  TF a = proj(1, 0), b = endo(1);
  auto envs = probe_envs(m.universe(), 1);
  auto p = nat::pair(nat::fst(a, b), nat::snd(a, b));
  CHECK(nat_diff(m, p, nat::id(prod_f(a, b)), envs).is_null());
  auto e = nat::eval(a, b);
  auto back = nat::curry(e, arrow_f(a, b), a);
  CHECK(nat_diff(m, back, nat::id(arrow_f(a, b)), envs).is_null());
  CHECK(nat_violation(m, e, envs).is_null());
}

TEST_CASE("closure") {
  auto id = sf::parse_program("u : unit = (/\\a. \\x:a. x) [unit] ()\n");
  auto ok = universe_closure(id, default_universe(), 16);
  CHECK(ok.closed);
  auto self = sf::parse_program(
      "self : (forall a. a -> a) -> (forall a. a -> a) = \\x:forall a. a -> a. x [forall a. a -> a] x\n");
  auto bad = universe_closure(self, default_universe(), 16);
  CHECK_FALSE(bad.closed);
  CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("universe json round trip") {
  auto u = default_universe();
  auto v = universe_from_json(to_json(u));
  CHECK(v.objs0 == u.objs0);
  CHECK(v.objs1 == u.objs1);
}
