#include "catch_amalgamated.hpp"

#include "pwb/systemf.hpp"

using namespace pwb;
using namespace pwb::sf;

namespace {

// Number of nested applications of variable `f` in the body of a normal Church numeral.
int church_value(const UTerm& t) {
  // \f. \x. f (f (... x))
  REQUIRE(t->kind == UKind::Lam);
  REQUIRE(t->a->kind == UKind::Lam);
  int n = 0;
  for (UTerm cur = t->a->a; cur->kind == UKind::App; cur = cur->b) {
    REQUIRE(cur->a->kind == UKind::Var);
    REQUIRE(cur->a->index == 1);
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("type syntax: arrows associate right and products bind tighter") {
  auto t = parse_type("forall a. a * a -> a -> a");
  auto expect = tforall(tarrow(tprod(tvar(0), tvar(0)), tarrow(tvar(0), tvar(0))));
  CHECK(type_equal(t, expect));
  CHECK(pretty(parse_type("forall a. a -> a")) == "forall a. a -> a");
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_term("\\x:unit. )");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.pos.line == 1);
    CHECK(e.pos.col == 10);
  }
}

TEST_CASE("typing of the usual suspects") {
  CHECK(type_equal(type_of(parse_term("/\\a. \\x:a. x")), parse_type("forall a. a -> a")));
  CHECK(type_equal(type_of(parse_term("/\\a. /\\b. \\p:a * b. (snd p, fst p)")),
                   parse_type("forall a. forall b. a * b -> b * a")));
  CHECK(type_equal(type_of(parse_term("(/\\a. \\x:a. x) [unit] ()")), tunit()));
  CHECK(type_equal(type_of(parse_term("\\x:forall a. a -> a. x [forall a. a -> a] x")),
                   parse_type("(forall a. a -> a) -> forall a. a -> a")));
}

TEST_CASE("type errors are classified") {
  try {
    type_of(parse_term("(\\x:unit. x) (/\\a. \\x:a. x)"));
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.code == TypeError::Code::Mismatch);
  }
  CHECK_THROWS_AS(type_of(parse_term("() ()")), TypeError);
  CHECK_THROWS_AS(type_of(parse_term("fst ()")), TypeError);
}

TEST_CASE("type substitution lowers free variables") {
  // (a -> b)[a := unit] in a context where b is variable 1
  auto body = tarrow(tvar(0), tvar(1));
  CHECK(type_equal(subst_type(body, tunit()), tarrow(tunit(), tvar(0))));
  CHECK(type_free_bound(body) == 2);
  CHECK(is_closed(parse_type("forall a. a -> a")));
}

TEST_CASE("normalization") {
  CHECK(term_equal(normalize(parse_term("(/\\a. \\x:a. x) [unit] ()")), unit()));
  CHECK(term_equal(normalize(parse_term("fst ((), /\\a. \\x:a. x)")), unit()));
  auto ids = parse_program(
      "id : forall a. a -> a = /\\a. \\x:a. x\n"
      "id2 : forall a. a -> a = /\\a. \\x:a. (\\y:a. y) x\n"
      "id3 : forall a. a -> a = /\\a. (/\\b. \\y:b. y) [a]\n");
  REQUIRE(ids.size() == 3);
  for (const auto& d : ids) CHECK(beta_eta_equal(d.term, ids[0].term));
  CHECK_FALSE(term_equal(ids[1].term, ids[0].term));
}

TEST_CASE("Church numerals compute") {
  auto prog = parse_program(
      "two : forall a. (a -> a) -> a -> a = /\\a. \\f:a -> a. \\x:a. f (f x)\n"
      "mul : (forall a. (a -> a) -> a -> a) -> (forall a. (a -> a) -> a -> a) -> forall a. (a -> a) -> a -> a = "
      "\\m:forall a. (a -> a) -> a -> a. \\n:forall a. (a -> a) -> a -> a. /\\a. \\f:a -> a. m [a] (n [a] f)\n"
      "four : forall a. (a -> a) -> a -> a = mul two two\n"
      "eight : forall a. (a -> a) -> a -> a = mul two four\n");
  CHECK(church_value(normalize(erase(prog[0].term))) == 2);
  CHECK(church_value(normalize(erase(prog[2].term))) == 4);
  CHECK(church_value(normalize(erase(prog[3].term))) == 8);
}

TEST_CASE("fuel exhaustion is reported") {
  auto t = parse_term("(\\x:unit. x) ((\\y:unit. y) ())");
  CHECK_THROWS_AS(normalize(t, 1), FuelExhausted);
  NormalizeStats st;
  normalize(t, 10, &st);
  CHECK(st.steps == 2);
}

TEST_CASE("erasure forgets types") {
  CHECK(uterm_equal(erase(parse_term("/\\a. \\x:a. x")), ulam(uvar(0))));
  CHECK(uterm_equal(erase(parse_term("(/\\a. \\x:a. x) [unit]")), ulam(uvar(0))));
}

TEST_CASE("programs inline earlier definitions") {
  auto prog = parse_program(
      "-- comment line\n"
      "id : forall a. a -> a = /\\a. \\x:a. x\n"
      "u : unit = id [unit] ()\n");
  REQUIRE(prog.size() == 2);
  CHECK(prog[1].line == 3);
  CHECK(term_equal(normalize(prog[1].term), unit()));
  CHECK_THROWS_AS(parse_program("x : unit = ()\nx : unit = ()\n"), SyntaxError);
}
