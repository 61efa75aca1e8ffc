#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwb/fibration.hpp"
#include "pwb/report.hpp"
#include "pwb/systemf.hpp"

namespace pwb::interp {

using fib::NatRep;
using fib::TF;
using fm::FinFn;
using fm::FinSet;
using fm::Rel;
using fm::RelMor;

TF interp_type(int depth, const sf::Type& t);

// x_0 * (x_1 * (... * 1)) with x_0 the innermost variable.
TF context_functor(const sf::Context& ctx);

// Natural transformation from the context functor to the type of t.
NatRep interp_term(const sf::Term& t, const sf::Context& ctx = {});

// A closed term t : forall a1..ak. T applied to its own type variables, as an open
// term of type T at type depth k. Returns the term and k.
std::pair<sf::Term, int> open_term(const sf::Term& t, const sf::Type& ty);

// Value of a term without term variables at a level-0 environment.
Label element(const fib::Model& m, const NatRep& n, const std::vector<FinSet>& env);

// ---- identity extension

// Image of each diagonal witness of Eq(obj), in element order.
struct EpsTable {
  FinSet obj;
  Rel target;
  std::vector<fm::Witness> images;
};

EpsTable eps_table(const RelMor& eps);
// Null when the table is a witness bijection with identity element maps.
nlohmann::json eps_violation(const EpsTable& t);

Report iel_check(const fib::Model& m, const sf::Type& t, int depth = 0);

// ---- abstraction theorem

fib::ProbeUniverse extend_universe(const fib::ProbeUniverse& u, const std::vector<Rel>& rels);

// Checks the opened term at every probe relation env of its arity (up to `cap`) and,
// when `focus` is non-empty, at every env built from the focus relations.
Report abstraction_check(const fib::Model& m, const sf::Term& t, const sf::Type& ty,
                         const std::vector<Rel>& focus = {}, std::size_t cap = 16);

// ---- free theorems on erased terms

struct FreeThmOptions {
  std::vector<int> carriers{1, 2, 3};
  std::vector<Rel> relations;  // replaces the generated relations when non-empty
  std::uint64_t fuel = sf::default_fuel();
  std::size_t max_instances = 1u << 16;
};

struct FreeThmResult {
  std::string verdict;  // identity, first projection, second projection, parametric, skip, fail
  Report report;
};

// `prog` supplies closed values for argument positions that cannot be enumerated.
FreeThmResult free_theorem_check(const sf::Term& t, const sf::Type& ty, const std::vector<sf::Definition>& prog,
                                 const FreeThmOptions& opt);

// Parses "3", "1,2,3" or "1-4".
std::vector<int> parse_carriers(const std::string& spec);

// ---- corpus-level checks over a model

struct InterpOptions {
  std::size_t env_cap = 16;
};

// Soundness, substitution lemma, validation of every NatRep, forall round-trips,
// identity extension and abstraction for each definition of the program.
Report interp_suite(const fib::Model& m, const std::vector<sf::Definition>& prog, const InterpOptions& opt = {});

}  // namespace pwb::interp
