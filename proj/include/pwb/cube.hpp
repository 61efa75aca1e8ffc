#pragma once

#include <array>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "pwb/fibration.hpp"
#include "pwb/report.hpp"
#include "pwb/tworel.hpp"

namespace pwb::cube {

using fib::TF;

// The four ways of turning a relation into a 2-relation.
enum class Degen { EqH, EqV, ConnTop, ConnBot };
constexpr std::array<Degen, 4> kDegens{Degen::EqH, Degen::EqV, Degen::ConnTop, Degen::ConnBot};
const char* to_string(Degen d);

// Which edges of D(r) carry r and which carry an equality relation, and which corners
// come from the domain (0) or the codomain (1) of r.
enum class EdgeRole { Rel, EqDom, EqCod };
struct Shape {
  std::array<int, 4> corner_side;
  std::array<EdgeRole, 4> edge;  // indexed by Face2
};
const Shape& shape(Degen d);

TwoRel degen(Degen d, const Rel& r);
TwoRelMor degen(Degen d, const RelMor& m);
std::vector<TwoRel> degen_env(Degen d, const std::vector<Rel>& env);

// Proof-relevant relations between {0..i-1} and {0..j-1}, 1 <= i, j <= bound, with up to
// `max_mult` witnesses per pair.
std::vector<Rel> witrels(int bound, int max_mult);

// Squares used as level-2 probes: every degeneracy and connection of a probe relation.
std::vector<TwoRel> probe_squares(const fib::ProbeUniverse& u);

// Level-2 action of a quantifier-free functor.
TwoRel eval2(const TF& f, const std::vector<TwoRel>& env);
TwoRelMor inverse(const TwoRelMor& m);

// The iso D(F(1) env) -> F(2)(D env): identity on the edges carrying F(1) env and
// epsilon on the equality edges. Nullopt when no such 2-relation morphism exists.
std::optional<TwoRelMor> epsilon2(const fib::Model& m, const TF& f, Degen d, const std::vector<Rel>& env);

// ---- level-2 extension of a natural transformation

struct Eta2Input {
  RelMor eta1;                  // at env
  RelMor eta1_dom, eta1_cod;    // at the equality environments of the two faces
  TwoRelMor eps_src, eps_tgt;   // epsilon2 for EqH of source and target functors
};

struct Eta2Result {
  std::optional<TwoRelMor> eta2;
  bool faces_ok = false;
  std::size_t solutions = 0;  // exhaustive count; zero when not searched
  nlohmann::json problem;     // null on success
};

Eta2Result eta2_extension(const Eta2Input& in, bool exhaustive, std::size_t cap = 1u << 14);

// (id, epsilon) from (F(0), Eq F(0)) to (F(0), F(1)) for a closed functor; null when valid.
nlohmann::json essential_surjectivity(const fib::Model& m, const TF& f);

// ---- membership in the quantified 2D type

// Level-0 data of an element: f0 per probe object, f1 per probe relation.
struct Element {
  std::vector<Label> f0;
  std::vector<Label> f1;
};

struct Membership {
  bool ok = true;
  nlohmann::json violation;  // first violated obligation
};

class Forall2 {
 public:
  Forall2(const fib::Model& m, TF body);

  const std::vector<TwoRel>& squares() const { return squares_; }

  // Element read off a family label of the level-0 quantifier at env.
  Element element(const std::vector<FinSet>& env, const Label& family) const;
  // phi per probe relation relating x at the domain env to y at the codomain env.
  std::vector<Label> relate(const std::vector<Rel>& env, const Element& x, const Element& y) const;

  Membership level0(const std::vector<FinSet>& env, const Element& x) const;
  Membership level1(const std::vector<Rel>& env, const Element& x, const Element& y,
                    const std::vector<Label>& phi) const;
  // Corner elements a, b, c, d and edge witnesses in Face2 order.
  Membership level2(const std::vector<TwoRel>& env, const std::array<Element, 4>& corners,
                    const std::array<std::vector<Label>, 4>& phis) const;

 private:
  // F(2)(env, Q) for every probe square Q, cached per environment.
  const std::vector<TwoRel>& at_squares(const std::vector<TwoRel>& env) const;

  const fib::Model& m_;
  TF body_;
  std::vector<TwoRel> squares_;
  std::vector<std::tuple<std::size_t, std::size_t, RelMor>> rel_isos_;
  mutable std::map<std::string, std::vector<TwoRel>> cache_;
};

// ---- law suite

struct CubeOptions {
  int bound = 2;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
};

Report cube_suite(const fib::Model& m, const std::vector<TF>& pool, const CubeOptions& opt);

}  // namespace pwb::cube
