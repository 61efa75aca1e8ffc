#include "catch_amalgamated.hpp"

#include "pwb/interp.hpp"

using namespace pwb;
using namespace pwb::interp;

namespace {

std::shared_ptr<const fib::ProbeUniverse> shared(fib::ProbeUniverse u) {
  return std::make_shared<const fib::ProbeUniverse>(std::move(u));
}

bool any_detail(const Report& r, const std::string& needle) {
  for (const auto& rec : r.records())
    if (rec.detail.find(needle) != std::string::npos) return true;
  return false;
}

const char* kBooleans =
    "tru : forall a. a -> a -> a = /\\a. \\x:a. \\y:a. x\n"
    "fls : forall a. a -> a -> a = /\\a. \\x:a. \\y:a. y\n"
    "id : forall a. a -> a = /\\a. \\x:a. x\n";

}  // namespace

TEST_CASE("types are interpreted with the innermost variable last") {
  auto t = interp_type(0, sf::parse_type("forall a. a -> a"));
  TF a = fib::proj(1, 0);
  CHECK(fib::same(t, fib::forall_f(fib::arrow_f(a, a))));
  CHECK(context_functor({})->arity == 0);
}

TEST_CASE("the polymorphic identity denotes the unique family") {
  fib::Model m(shared(fib::default_universe()));
  auto id = sf::parse_term("/\\a. \\x:a. x");
  auto ty = sf::type_of(id);
  Label e = element(m, interp_term(id), {});
  auto carrier = m.eval0(interp_type(0, ty), {});
  REQUIRE(carrier.size() == 1);
  CHECK(e == carrier.at(0));

  auto [open, k] = open_term(id, ty);
  REQUIRE(k == 1);
  for (const auto& a : m.universe().objs0) CHECK(element(m, interp_term(open, {k, {}}), {a}) == FinFn::identity(a).as_label());
}

TEST_CASE("beta-equal terms have equal interpretations") {
  // instantiating at unit needs the one-element carrier
  auto prog = sf::parse_program("u : unit = (/\\a. \\x:a. x) [unit] ()\n");
  auto cl = fib::universe_closure(prog, fib::default_universe(), 16);
  REQUIRE(cl.closed);
  fib::Model m(shared(cl.universe));
  auto lhs = interp_term(prog[0].term);
  auto rhs = interp_term(sf::unit());
  CHECK(fib::nat_diff(m, lhs, rhs, fib::probe_envs(m.universe(), 0)).is_null());
  CHECK(element(m, lhs, {}) == m.eval0(fib::unit_f(0), {}).at(0));
}

TEST_CASE("identity extension holds for small types") {
  fib::Model m(shared(fib::default_universe()));
  CHECK(iel_check(m, sf::tunit()).ok());
  auto r = iel_check(m, sf::tprod(sf::tarrow(sf::tvar(0), sf::tvar(0)), sf::tvar(0)), 1);
  CHECK(r.ok());
  // |A -> A| * |A| at |A| = 2
  CHECK(any_detail(r, "|T0|=8"));
  CHECK(iel_check(m, sf::parse_type("forall a. a -> a -> a")).ok());
}

TEST_CASE("abstraction at a singleton relation on a three-element carrier") {
  auto A = FinSet::atoms(3);
  Rel r = Rel::from_pairs(A, A, {{Label::atom(1), Label::atom(1)}});
  auto prog = sf::parse_program(kBooleans);
  auto cl = fib::universe_closure(prog, extend_universe(fib::default_universe(), {r}), 16);
  REQUIRE(cl.closed);
  fib::Model m(shared(cl.universe));
  const auto& id = prog[2];
  auto rep = abstraction_check(m, id.term, id.declared, {r});
  CHECK(rep.ok());
  CHECK(rep.count(Status::Pass) > 0);
}

TEST_CASE("free theorem verdicts for the boolean and identity terms") {
  auto prog = sf::parse_program(kBooleans);
  FreeThmOptions opt;
  opt.carriers = {1, 2, 3};
  CHECK(free_theorem_check(prog[0].term, prog[0].declared, prog, opt).verdict == "first projection");
  CHECK(free_theorem_check(prog[1].term, prog[1].declared, prog, opt).verdict == "second projection");
  CHECK(free_theorem_check(prog[2].term, prog[2].declared, prog, opt).verdict == "identity");
}

TEST_CASE("carrier specifications") {
  CHECK(parse_carriers("3") == std::vector<int>{3});
  CHECK(parse_carriers("1,2,3") == std::vector<int>{1, 2, 3});
  CHECK(parse_carriers("1-4") == std::vector<int>{1, 2, 3, 4});
  CHECK_THROWS(parse_carriers("0"));
  CHECK_THROWS(parse_carriers("9"));
  CHECK_THROWS(parse_carriers("x"));
}

TEST_CASE("mutated epsilon tables and components are detected") {
  fib::Model m(shared(fib::default_universe()));
  TF a = fib::proj(1, 0);
  TF f = fib::arrow_f(a, a);
  FinSet two = FinSet::atoms(2);
  auto t = eps_table(m.epsilon(f, {two}));
  REQUIRE(eps_violation(t).is_null());
  REQUIRE(t.images.size() >= 2);
  auto bad = t;
  bad.images[0] = bad.images[1];
  CHECK_FALSE(eps_violation(bad).is_null());

  auto [open, k] = open_term(sf::parse_term("/\\a. \\x:a. x"), sf::parse_type("forall a. a -> a"));
  auto id = interp_term(open, {k, {}});
  auto envs = fib::probe_envs(m.universe(), 1);
  REQUIRE(fib::nat_violation(m, id, envs).is_null());
  auto mutated = id;
  auto at0 = id.at0;
  mutated.at0 = [at0](const fib::Model& mm, const std::vector<FinSet>& env) {
    FinFn g = at0(mm, env);
    if (g.cod().size() < 2) return g;
    auto img = g.images();
    img[0] = (img[0] + 1) % static_cast<std::uint32_t>(g.cod().size());
    return FinFn::from_indices(g.dom(), g.cod(), img);
  };
  CHECK_FALSE(fib::nat_violation(m, mutated, envs).is_null());
}
