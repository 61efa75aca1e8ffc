#pragma once

#include <functional>
#include <map>
#include <unordered_map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwb/finmodel.hpp"
#include "pwb/report.hpp"
#include "pwb/systemf.hpp"
#include "pwb/tworel.hpp"

namespace pwb::fib {

using fm::FinFn;
using fm::FinSet;
using fm::Policy;
using fm::Rel;
using fm::RelMor;

// ---- reified type functors M^n -> M

enum class FKind { Proj, Unit, Prod, Arrow, Forall, Subst };

struct FNode;
using TF = std::shared_ptr<const FNode>;

struct FNode {
  FKind kind;
  int arity = 0;
  int index = 0;          // Proj
  TF a, b;                // Prod/Arrow operands; Forall body in a; Subst outer functor in a
  std::vector<TF> args;   // Subst arguments
  std::string key;        // canonical printed form
  std::size_t hash = 0;   // hash of key
};

TF proj(int n, int i);
TF unit_f(int n);
TF prod_f(TF a, TF b);
TF arrow_f(TF a, TF b);
TF forall_f(TF body);  // arity of body minus one
TF subst_f(TF g, std::vector<TF> args, int n);

inline bool same(const TF& x, const TF& y) { return x->key == y->key; }
inline const std::string& str(const TF& f) { return f->key; }
bool has_forall(const TF& f);
std::size_t functor_size(const TF& f);

// Structural substitution g[args]; the result has no Subst nodes.
TF substitute(const TF& g, const std::vector<TF>& args, int n);
TF eager(const TF& f);
// Precomposition with the projection n+1 -> n that forgets the last entry.
TF weaken(const TF& f);

// de Bruijn variable i at depth n is Proj(n-1-i), so the innermost binder is the last entry.
TF from_type(const sf::Type& t, int depth);

// ---- probe universe

struct ProbeUniverse {
  std::string name = "custom";
  Policy policy = Policy::Rey;
  std::vector<FinSet> objs0;
  std::vector<Rel> objs1;
  std::vector<cube::TwoRel> objs2;

  // Adds endpoints of relations and Eq images, then sorts and indexes.
  void finish();
  std::optional<std::size_t> index0(const FinSet& a) const;
  std::optional<std::size_t> index1(const Rel& r) const;
  // Relevant isomorphisms between probe objects that are not identities.
  const std::vector<std::pair<std::size_t, FinFn>>& isos0() const { return isos0_; }
  std::string summary() const;

 private:
  std::map<FinSet, std::size_t> idx0_;
  std::map<Rel, std::size_t> idx1_;
  std::vector<std::pair<std::size_t, FinFn>> isos0_;  // (source probe, iso)
};

using UniversePtr = std::shared_ptr<const ProbeUniverse>;

// Objects {0} and {0,1}, nine relations between them (Eq images included).
ProbeUniverse default_universe(Policy p = Policy::Rey);
// Objects {0..k-1} for k <= max_size and every w-labelled relation between them.
ProbeUniverse universe_upto(int max_size, Policy p = Policy::Rey);
nlohmann::json to_json(const ProbeUniverse& u);
ProbeUniverse universe_from_json(const nlohmann::json& j);
ProbeUniverse load_universe(const std::string& path);

// ---- evaluation

class Model {
 public:
  explicit Model(UniversePtr u) : u_(std::move(u)) {}
  const ProbeUniverse& universe() const { return *u_; }
  UniversePtr universe_ptr() const { return u_; }

  FinSet eval0(const TF& f, const std::vector<FinSet>& env) const;
  Rel eval1(const TF& f, const std::vector<Rel>& env) const;
  // A witness of F(1)(env)(x, y) computed without materialising F(1)(env).
  std::optional<Label> relates(const TF& f, const std::vector<Rel>& env, const Label& x, const Label& y) const;

  // Action on tuples of relevant isomorphisms.
  FinFn eval_mor0(const TF& f, const std::vector<FinFn>& isos) const;
  RelMor eval_mor1(const TF& f, const std::vector<RelMor>& isos) const;

  // The iso Eq(F(0) env) -> F(1)(Eq env).
  RelMor epsilon(const TF& f, const std::vector<FinSet>& env) const;

  // Probe-indexed entries of a family label.
  static const Label& family_at(const Label& fam, std::size_t j);

 private:
  FinSet forall0(const TF& f, const std::vector<FinSet>& env) const;
  RelMor epsilon_uncached(const TF& f, const std::vector<FinSet>& env) const;
  Rel forall1(const TF& f, const std::vector<Rel>& env) const;

  // Memo entries are keyed by functor and the storage addresses of the environment;
  // the stored environment keeps those addresses alive.
  struct MemoKey {
    TF f;
    std::vector<const void*> env;
    bool operator==(const MemoKey& o) const { return env == o.env && f->key == o.f->key; }
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const;
  };
  template <class T>
  struct Entry {
    std::vector<T> env;
    T value;
  };

  UniversePtr u_;
  mutable std::mutex mu_;
  mutable std::unordered_map<MemoKey, Entry<FinSet>, MemoHash> memo0_;
  mutable std::unordered_map<MemoKey, Entry<Rel>, MemoHash> memo1_;
  struct EpsEntry {
    std::vector<FinSet> env;
    RelMor value;
  };
  mutable std::unordered_map<MemoKey, EpsEntry, MemoHash> memo_eps_;
};

std::vector<FinSet> dom_env(const std::vector<Rel>& env);
std::vector<FinSet> cod_env(const std::vector<Rel>& env);
std::vector<Rel> eq_env(const std::vector<FinSet>& env);

// ---- natural transformations, evaluated on demand

struct NatRep {
  TF src, tgt;
  std::function<FinFn(const Model&, const std::vector<FinSet>&)> at0;
  std::function<RelMor(const Model&, const std::vector<Rel>&)> at1;
  std::string name;
  int arity() const { return src->arity; }
};

namespace nat {
NatRep id(const TF& f);
NatRep compose(const NatRep& n, const NatRep& m);  // n after m
NatRep terminal(const TF& f);                     // F -> 1
NatRep fst(const TF& f, const TF& g);             // F x G -> F
NatRep snd(const TF& f, const TF& g);
NatRep pair(const NatRep& m, const NatRep& n);
NatRep prod_map(const NatRep& m, const NatRep& n);
NatRep eval(const TF& f, const TF& g);            // (F => G) x F -> G
NatRep curry(const NatRep& m, const TF& h, const TF& f);  // m : H x F -> G
// Forall on natural transformations between arity n+1 functors.
NatRep forall_map(const NatRep& m);
// m : weaken(F) -> G gives F -> forall G.
NatRep transpose(const NatRep& m, const TF& f);
// weaken(forall G) -> G; needs the last entry of the environment to be a probe.
NatRep counit(const TF& g);
}  // namespace nat

// ---- contexts and substitution

struct CtxMor {
  int src = 0, tgt = 0;
  std::vector<TF> comps;  // tgt functors of arity src
};

CtxMor ctx_id(int n);
CtxMor ctx_compose(const CtxMor& g, const CtxMor& f);  // g after f
CtxMor ctx_proj(int n);                                // n+1 -> n, forgets the last entry
CtxMor ctx_bang(int n);                                // n -> 0
CtxMor ctx_pair(const CtxMor& f, const TF& x);         // n -> m+1
TF reindex(const CtxMor& f, const TF& x);
TF reindex_lazy(const CtxMor& f, const TF& x);
NatRep reindex(const CtxMor& f, const NatRep& m);
// Generic object: fiber objects over n correspond to context morphisms n -> 1.
CtxMor theta(const TF& x);
TF theta_inv(const CtxMor& f);

// ---- Grothendieck total category

struct TotalObj {
  int n = 0;
  TF x;
};

struct TotalMor {
  TotalObj src, tgt;
  CtxMor base;
  NatRep fib;  // src.x -> base*(tgt.x)
};

TotalMor total_id(const TotalObj& o);
TotalMor total_compose(const TotalMor& g, const TotalMor& f);
TotalMor cartesian_lift(const CtxMor& f, const TotalObj& y);

// ---- extensional comparison at probe environments

struct ProbeEnvs {
  std::vector<std::vector<FinSet>> level0;
  std::vector<std::vector<Rel>> level1;
};
ProbeEnvs probe_envs(const ProbeUniverse& u, int n, std::size_t cap = 256);

// Null when F and G agree at every probe environment (values and epsilon).
nlohmann::json functor_diff(const Model& m, const TF& f, const TF& g, const ProbeEnvs& envs);
nlohmann::json nat_diff(const Model& m, const NatRep& a, const NatRep& b, const ProbeEnvs& envs);
// Face equation, naturality in the domain and degeneracy square at every probe env.
nlohmann::json nat_violation(const Model& m, const NatRep& a, const ProbeEnvs& envs);

// ---- universe closure

struct ClosureResult {
  ProbeUniverse universe;
  bool closed = false;
  int iterations = 0;
  std::string reason;
};

// Adds the values of every type argument in the program at probe environments until
// nothing changes; fails once more than `bound` objects would be needed.
ClosureResult universe_closure(const std::vector<sf::Definition>& prog, const ProbeUniverse& seed,
                               std::size_t bound);

// ---- law suite

struct FibrationOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  int max_arity = 2;
};

// Functors of arity <= max_arity obtained from subterms of the given types.
std::vector<TF> corpus_functors(const std::vector<sf::Type>& types, int max_arity);

Report fibration_suite(const Model& m, const std::vector<TF>& pool, const FibrationOptions& opt);

}  // namespace pwb::fib
