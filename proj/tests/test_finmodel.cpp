#include "catch_amalgamated.hpp"

#include <cmath>

#include "pwb/finmodel.hpp"

using namespace pwb;
using namespace pwb::fm;

namespace {

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

// Plain-array relation used as the oracle.
using Pairs = std::vector<std::vector<bool>>;

Pairs pairs_of(const Rel& r) {
  Pairs p(r.dom().size(), std::vector<bool>(r.cod().size(), false));
  for (const auto& e : r.entries()) p[e.a][e.b] = true;
  return p;
}

std::vector<std::uint32_t> table(const FinFn& f) { return f.images(); }

}  // namespace

TEST_CASE("exponential objects have |B|^|A| elements") {
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      CHECK(exponential(FinSet::atoms(a), FinSet::atoms(b)).size() == ipow(static_cast<std::size_t>(b), static_cast<std::size_t>(a)));
  CHECK(all_functions(FinSet::atoms(2), FinSet::atoms(3)).size() == 9);
  CHECK(all_bijections(FinSet::atoms(3), FinSet::atoms(3)).size() == 6);
}

TEST_CASE("there are 2^(|A||B|) propositional relations") {
  CHECK(all_prop_relations(FinSet::atoms(1), FinSet::atoms(2)).size() == 4);
  CHECK(all_prop_relations(FinSet::atoms(2), FinSet::atoms(2)).size() == 16);
  CHECK(all_prop_relations(FinSet::atoms(2), FinSet::atoms(3)).size() == 64);
}

TEST_CASE("equality relations") {
  auto a = FinSet::atoms(3);
  Rel e = eq(a);
  CHECK(e.witness_count() == 3);
  CHECK(e.related(Label::atom(1), Label::atom(1)));
  CHECK_FALSE(e.related(Label::atom(0), Label::atom(1)));
  auto f = FinFn::from_indices(a, a, {1, 2, 0});
  RelMor m = eq(f);
  CHECK(m.f() == f);
  CHECK(m.g() == f);
}

TEST_CASE("exponential relation agrees with the pointwise definition") {
  // (f, g) related iff every R-related (x, y) is sent to S-related (f x, g y)
  auto A = FinSet::atoms(2), B = FinSet::atoms(2);
  auto rels = all_prop_relations(A, B);
  for (std::size_t i = 0; i < rels.size(); i += 3)
    for (std::size_t j = 0; j < rels.size(); j += 5) {
      const Rel &R = rels[i], &S = rels[j];
      Rel E = exponential(R, S);
      auto pr = pairs_of(R), ps = pairs_of(S);
      auto fs = all_functions(A, A), gs = all_functions(B, B);
      for (const auto& f : fs)
        for (const auto& g : gs) {
          auto tf = table(f), tg = table(g);
          bool expect = true;
          for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y)
              if (pr[x][y] && !ps[tf[x]][tg[y]]) expect = false;
          CHECK(E.related(f.as_label(), g.as_label()) == expect);
        }
    }
}

TEST_CASE("product relations multiply witnesses") {
  auto A = FinSet::atoms(2);
  Rel r = Rel::make(A, A, {{Label::atom(0), Label::atom(0), Label::sym("p")},
                           {Label::atom(0), Label::atom(0), Label::sym("q")},
                           {Label::atom(1), Label::atom(0), Label::sym("p")}});
  Rel s = eq(A);
  CHECK(product(r, s).witness_count() == r.witness_count() * s.witness_count());
  CHECK_FALSE(r.is_propositional());
  CHECK(s.is_propositional());
}

TEST_CASE("level-0 beta for curry and eval") {
  auto C = FinSet::atoms(2), A = FinSet::atoms(2), B = FinSet::atoms(3);
  auto CA = product(C, A);
  for (const auto& f : all_functions(CA, B)) {
    FinFn lhs = compose(eval(A, B), prod_map(curry(f, C, A), FinFn::identity(A)));
    CHECK(lhs == f);
  }
}

TEST_CASE("the eta isomorphisms have identity faces") {
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b) {
      auto A = FinSet::atoms(a), B = FinSet::atoms(b);
      for (const auto& m : {eta_prod(A, B), eta_exp(A, B)}) {
        CHECK(m.is_iso());
        CHECK(m.has_identity_faces());
      }
    }
  CHECK(eta_unit().is_iso());
}

TEST_CASE("relation morphisms between proof-relevant relations are counted exactly") {
  // two witnesses over one pair: morphisms to itself choose a witness image for each
  auto one = FinSet::atoms(1);
  Rel r = Rel::make(one, one, {{Label::atom(0), Label::atom(0), Label::sym("p")},
                               {Label::atom(0), Label::atom(0), Label::sym("q")}});
  CHECK(all_rel_morphisms(r, r).size() == 4);
  CHECK(all_rel_isos(r, r).size() == 2);
}

TEST_CASE("json round trip of relations") {
  auto A = FinSet::atoms(2);
  Rel r = Rel::from_pairs(A, A, {{Label::atom(0), Label::atom(1)}});
  CHECK(rel_from_json(to_json(r)) == r);
}
