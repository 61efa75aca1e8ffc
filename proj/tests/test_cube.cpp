#include "catch_amalgamated.hpp"

#include "pwb/cube.hpp"

using namespace pwb;
using namespace pwb::cube;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

fib::Model default_model() { return fib::Model(std::make_shared<const fib::ProbeUniverse>(fib::default_universe())); }

}  // namespace

TEST_CASE("witness relations are counted by multiplicity per pair") {
  // each of the i*j pairs carries 0..max_mult witnesses
  for (int mult = 1; mult <= 2; ++mult) {
    std::size_t expect = 0;
    for (std::size_t i = 1; i <= 2; ++i)
      for (std::size_t j = 1; j <= 2; ++j) expect += ipow(static_cast<std::size_t>(mult) + 1, i * j);
    CHECK(witrels(2, mult).size() == expect);
  }
  CHECK(witrels(2, 2).size() == 102);
}

TEST_CASE("degeneracies put the relation on the edges named by their shape") {
  auto A = FinSet::atoms(2), B = FinSet::atoms(1);
  Rel r = Rel::from_pairs(A, B, {{Label::atom(0), Label::atom(0)}});
  for (auto d : kDegens) {
    TwoRel q = degen(d, r);
    const Shape& s = shape(d);
    INFO(to_string(d));
    for (auto f : kFaces2) {
      const Rel& e = q.edge(f);
      switch (s.edge[static_cast<int>(f)]) {
        case EdgeRole::Rel: CHECK(e == r); break;
        case EdgeRole::EqDom: CHECK(e == fm::eq(A)); break;
        case EdgeRole::EqCod: CHECK(e == fm::eq(B)); break;
      }
    }
    for (int c = 0; c < 4; ++c) CHECK(q.corner(c) == (s.corner_side[c] == 0 ? A : B));
  }
  CHECK(transpose(eq_h(r)) == eq_v(r));
  CHECK(transpose(transpose(conn_top(r))) == conn_top(r));
}

TEST_CASE("identity 2-relation morphisms compose") {
  auto A = FinSet::atoms(2);
  Rel r = Rel::from_pairs(A, A, {{Label::atom(0), Label::atom(1)}, {Label::atom(1), Label::atom(1)}});
  TwoRel q = conn_bot(r);
  auto id = TwoRelMor::identity(q);
  CHECK(id.is_iso());
  CHECK(compose(id, id) == id);
  CHECK(tworel_from_json(to_json(q)) == q);
}

TEST_CASE("probe squares on the default universe") {
  auto u = fib::default_universe();
  auto sq = probe_squares(u);
  // nine relations, four degeneracies each; equality relations collapse their four shapes
  std::size_t distinct = 0;
  std::vector<TwoRel> seen;
  for (const auto& r : u.objs1)
    for (auto d : kDegens) {
      TwoRel q = degen(d, r);
      if (std::find(seen.begin(), seen.end(), q) == seen.end()) {
        seen.push_back(q);
        ++distinct;
      }
    }
  CHECK(sq.size() == distinct + u.objs2.size());
  CHECK(sq.size() == 30);
}

TEST_CASE("epsilon2 exists and is invertible") {
  auto m = default_model();
  TF p = fib::proj(1, 0);
  std::vector<TF> fs = {p, fib::arrow_f(p, p), fib::prod_f(p, fib::unit_f(1)), fib::unit_f(1)};
  auto envs = fib::probe_envs(m.universe(), 1);
  for (const auto& f : fs)
    for (auto d : kDegens)
      for (const auto& env : envs.level1) {
        auto e = epsilon2(m, f, d, env);
        INFO(f->key << " " << to_string(d));
        REQUIRE(e.has_value());
        CHECK(e->is_iso());
        CHECK(compose(inverse(*e), *e) == TwoRelMor::identity(e->src()));
      }
}

TEST_CASE("the identity transformation has a unique level-2 extension") {
  auto m = default_model();
  TF p = fib::proj(1, 0);
  auto eta = fib::nat::id(fib::arrow_f(p, p));
  for (const auto& env : fib::probe_envs(m.universe(), 1).level1) {
    auto es = epsilon2(m, eta.src, Degen::EqH, env);
    REQUIRE(es.has_value());
    Eta2Input in{eta.at1(m, env), eta.at1(m, fib::eq_env(fib::dom_env(env))),
                 eta.at1(m, fib::eq_env(fib::cod_env(env))), *es, *es};
    auto res = eta2_extension(in, true);
    REQUIRE(res.eta2.has_value());
    CHECK(res.faces_ok);
    CHECK(res.solutions == 1);
  }
}

TEST_CASE("closed functors are essentially surjective") {
  auto m = default_model();
  TF p = fib::proj(1, 0);
  CHECK(essential_surjectivity(m, fib::forall_f(fib::arrow_f(p, p))).is_null());
  CHECK(essential_surjectivity(m, fib::unit_f(0)).is_null());
}

TEST_CASE("the 2D quantifier rejects bodies with quantifiers") {
  auto m = default_model();
  TF p = fib::proj(2, 1);
  CHECK_THROWS(Forall2(m, fib::forall_f(fib::arrow_f(p, p))));
  Forall2 ok(m, fib::arrow_f(fib::proj(1, 0), fib::proj(1, 0)));
  CHECK(ok.squares().size() == 30);
}
