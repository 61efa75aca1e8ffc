#include "catch_amalgamated.hpp"

#include <random>

#include "pwb/instance.hpp"
#include "pwb/rgalg.hpp"

using namespace pwb;

namespace {

fm::InstancePtr rey2() {
  static fm::InstancePtr inst = fm::build_instance(fm::Policy::Rey, 2);
  return inst;
}

}  // namespace

TEST_CASE("the finite instance has the expected size") {
  auto inst = rey2();
  // carriers {0} and {0,1}; functions between them: 1 + 1 + 2 + 4
  CHECK(inst->sets.size() == 2);
  CHECK(inst->fns.size() == 8);
  // w-labelled relations: 2^1 + 2^2 + 2^2 + 2^4, plus the two equality relations
  CHECK(inst->rels.size() == 28);
}

TEST_CASE("the instance is a reflexive graph category generating seven maps") {
  for (auto p : {fm::Policy::Strict, fm::Policy::Rey, fm::Policy::Crey}) {
    auto inst = fm::build_instance(p, 2);
    auto r = rg::validate_rg(*inst->cat, inst->iso);
    INFO(fm::to_string(p));
    CHECK(r.ok());
    CHECK(rg::generated_map_count(*inst->cat) == 7);
  }
}

TEST_CASE("pool functors validate and compose") {
  auto inst = rey2();
  auto pool = fm::functor_pool(*inst);
  REQUIRE(pool.size() >= 3);
  for (const auto& f : pool) CHECK(rg::validate_functor(*f, inst->iso, inst->iso).ok());
  auto gf = rg::compose_functor(pool[1], pool[2]);
  CHECK(rg::validate_functor(*gf, inst->iso, inst->iso).ok());
  auto id = rg::identity_functor(inst->cat);
  CHECK(rg::same_functor(*rg::compose_functor(id, pool[1]), *pool[1]));
}

TEST_CASE("the identity functor has exactly the identity transformation") {
  auto inst = rey2();
  auto id = rg::identity_functor(inst->cat);
  auto nats = rg::enumerate_nats(id, id);
  REQUIRE(!nats.empty());
  bool found = false;
  for (const auto& n : nats) {
    CHECK(rg::validate_nat(n, inst->iso).ok());
    found = found || rg::same_nat(n, rg::identity_nat(id));
  }
  CHECK(found);
}

TEST_CASE("law suite passes on a small sample") {
  auto inst = rey2();
  rg::LawSuiteOptions opt;
  opt.samples = 40;
  auto r = rg::law_suite(fm::functor_pool(*inst), inst->iso, opt);
  CHECK(r.ok());
  CHECK(r.count(Status::Pass) > 0);
}

TEST_CASE("validators catch single-entry mutations") {
  auto inst = rey2();
  auto pool = fm::functor_pool(*inst);
  std::mt19937_64 rng(42);
  int mutated = 0;
  for (const auto& f : pool) {
    rg::RgFunctorTab copy = *f;
    auto mu = rg::mutate_eps(copy, rng);
    if (!mu.applied) continue;
    ++mutated;
    INFO(mu.where);
    CHECK_FALSE(rg::validate_functor(copy, inst->iso, inst->iso).ok());
  }
  CHECK(mutated > 0);
  auto id = rg::identity_functor(inst->cat);
  rg::RgNatTab n = rg::identity_nat(id);
  for (int k = 0; k < 10; ++k) {
    rg::RgNatTab copy = n;
    auto mu = rg::mutate_nat(copy, rng);
    REQUIRE(mu.applied);
    INFO(mu.where);
    CHECK_FALSE(rg::validate_nat(copy, inst->iso).ok());
  }
}

TEST_CASE("json round trip of an rg category") {
  auto inst = rey2();
  auto j = rg::to_json(*inst->cat, inst->iso);
  auto [cat, iso] = rg::rg_from_json(j);
  CHECK(cat.level[0].object_count() == inst->cat->level[0].object_count());
  CHECK(cat.level[1].morphism_count() == inst->cat->level[1].morphism_count());
  CHECK(rg::validate_rg(cat, iso).ok());
}
