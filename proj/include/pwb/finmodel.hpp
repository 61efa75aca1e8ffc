#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pwb/label.hpp"

namespace pwb::fm {

struct Limits {
  std::size_t max_set = 1u << 16;          // elements of a single finite set
  std::size_t max_pairs = 1u << 22;        // (a, b) pairs inspected when building a relation
  std::size_t max_witnesses = 1u << 18;    // witnesses of a single relation
};

const Limits& limits();
void set_limits(const Limits& l);

// Lowers the limits to at most `cap` for the lifetime of the guard.
class LimitsGuard {
 public:
  explicit LimitsGuard(const Limits& cap) : saved_(limits()) {
    Limits l = saved_;
    l.max_set = std::min(l.max_set, cap.max_set);
    l.max_pairs = std::min(l.max_pairs, cap.max_pairs);
    l.max_witnesses = std::min(l.max_witnesses, cap.max_witnesses);
    set_limits(l);
  }
  ~LimitsGuard() { set_limits(saved_); }
  LimitsGuard(const LimitsGuard&) = delete;
  LimitsGuard& operator=(const LimitsGuard&) = delete;

 private:
  Limits saved_;
};

// ---- sets

class FinSet {
 public:
  FinSet();
  // Sorts the elements; duplicates are rejected.
  static FinSet of(std::vector<Label> elems);
  static FinSet atoms(int n);  // {0, ..., n-1}

  std::span<const Label> elements() const { return *elems_; }
  std::size_t size() const { return elems_->size(); }
  bool empty() const { return elems_->empty(); }
  const Label& at(std::size_t i) const { return (*elems_)[i]; }
  std::optional<std::size_t> index_of(const Label& x) const;
  std::size_t index(const Label& x) const;  // throws when absent
  bool contains(const Label& x) const { return index_of(x).has_value(); }

  std::string str() const;
  // Address of the shared element storage; equal addresses imply equal sets.
  const void* identity() const { return elems_.get(); }

  friend bool operator==(const FinSet& a, const FinSet& b);
  friend std::strong_ordering operator<=>(const FinSet& a, const FinSet& b);

 private:
  std::shared_ptr<const std::vector<Label>> elems_;
};

// ---- functions

class FinFn {
 public:
  FinFn() = default;
  static FinFn from_labels(FinSet dom, FinSet cod, const std::vector<Label>& values);
  static FinFn from_indices(FinSet dom, FinSet cod, std::vector<std::uint32_t> img);
  static FinFn from_table(FinSet dom, FinSet cod, const Label& table);
  static FinFn build(FinSet dom, FinSet cod, const std::function<Label(const Label&)>& f);
  static FinFn identity(const FinSet& a);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const Label& operator()(const Label& x) const;
  std::uint32_t image_index(std::size_t i) const { return (*img_)[i]; }
  const std::vector<std::uint32_t>& images() const { return *img_; }

  bool is_identity() const;
  bool is_bijection() const;
  FinFn inverse() const;
  Label as_label() const;

  friend bool operator==(const FinFn& a, const FinFn& b);

 private:
  FinSet dom_, cod_;
  std::shared_ptr<const std::vector<std::uint32_t>> img_ = std::make_shared<std::vector<std::uint32_t>>();
};

FinFn compose(const FinFn& g, const FinFn& f);  // g after f

// ---- relations (proof-relevant in general)

struct Witness {
  Label a, b, w;
};

class Rel {
 public:
  struct Entry {
    std::uint32_t a, b;
    std::vector<Label> ws;  // sorted, non-empty
  };

  Rel();
  static Rel make(FinSet dom, FinSet cod, std::vector<Witness> triples);
  static Rel from_entries(FinSet dom, FinSet cod, std::vector<Entry> entries);
  // Relation with witness `w` on each listed pair.
  static Rel from_pairs(FinSet dom, FinSet cod, const std::vector<std::pair<Label, Label>>& pairs,
                        const Label& w = Label::sym("w"));

  const FinSet& dom() const { return d_->dom; }
  const FinSet& cod() const { return d_->cod; }
  std::span<const Entry> entries() const { return d_->entries; }
  std::optional<std::size_t> entry_of(std::uint32_t a, std::uint32_t b) const;
  std::span<const Label> witnesses(std::uint32_t a, std::uint32_t b) const;
  std::span<const Label> witnesses(const Label& a, const Label& b) const;
  bool related(const Label& a, const Label& b) const { return !witnesses(a, b).empty(); }

  std::size_t witness_count() const { return d_->offset.back(); }
  std::size_t pair_count() const { return d_->entries.size(); }
  // Flat numbering of witnesses in (a, b, w) order.
  std::optional<std::size_t> flat_index(std::uint32_t a, std::uint32_t b, const Label& w) const;
  std::size_t entry_offset(std::size_t e) const { return d_->offset[e]; }
  Witness witness_at(std::size_t flat) const;
  const Label& witness_label(std::size_t flat) const;
  std::size_t entry_of_flat(std::size_t flat) const;

  bool is_propositional() const;
  std::string str() const;
  const void* identity() const { return d_.get(); }

  friend bool operator==(const Rel& a, const Rel& b);
  friend std::strong_ordering operator<=>(const Rel& a, const Rel& b);

 private:
  struct Data {
    FinSet dom, cod;
    std::vector<Entry> entries;
    std::vector<std::size_t> offset;
  };
  explicit Rel(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

// ---- relation morphisms: (f, g) on the endpoints plus an action on witnesses

class RelMor {
 public:
  RelMor() = default;
  static RelMor make(Rel src, Rel tgt, FinFn f, FinFn g, const std::vector<Label>& action);
  static RelMor build(Rel src, Rel tgt, FinFn f, FinFn g,
                      const std::function<Label(const Witness&)>& act);
  // Valid when every target fibre is a singleton (propositional target).
  static RelMor forced(Rel src, Rel tgt, FinFn f, FinFn g);
  static RelMor identity(const Rel& r);

  const Rel& src() const { return src_; }
  const Rel& tgt() const { return tgt_; }
  const FinFn& f() const { return f_; }  // domain-side face image
  const FinFn& g() const { return g_; }  // codomain-side face image
  const Label& act(std::size_t flat) const;
  std::size_t act_index(std::size_t flat) const { return (*action_)[flat]; }
  const Label& act(const Label& a, const Label& b, const Label& w) const;
  Witness apply(const Witness& x) const;

  bool is_iso() const;
  bool is_identity() const;
  RelMor inverse() const;
  bool has_identity_faces() const { return f_.is_identity() && g_.is_identity(); }

  friend bool operator==(const RelMor& a, const RelMor& b);

 private:
  Rel src_, tgt_;
  FinFn f_, g_;
  std::shared_ptr<const std::vector<std::uint32_t>> action_ = std::make_shared<std::vector<std::uint32_t>>();
};

RelMor compose(const RelMor& n, const RelMor& m);  // n after m

// ---- degeneracy

Rel eq(const FinSet& a);
RelMor eq(const FinFn& f);

// ---- cartesian closed structure, level 0

FinSet terminal();
FinSet product(const FinSet& a, const FinSet& b);
FinSet exponential(const FinSet& a, const FinSet& b);
FinFn bang(const FinSet& a);
FinFn fst(const FinSet& a, const FinSet& b);
FinFn snd(const FinSet& a, const FinSet& b);
FinFn pairing(const FinFn& f, const FinFn& g);
FinFn prod_map(const FinFn& f, const FinFn& g);
FinFn eval(const FinSet& a, const FinSet& b);        // (a => b) x a -> b
FinFn curry(const FinFn& f, const FinSet& c, const FinSet& a);  // f : c x a -> b  gives  c -> (a => b)
FinFn exp_map(const FinFn& i, const FinFn& j);       // phi |-> j . phi . i^-1, i a bijection

// ---- cartesian closed structure, level 1

Rel terminal_rel();
Rel product(const Rel& r, const Rel& s);
Rel exponential(const Rel& r, const Rel& s);
RelMor bang(const Rel& r);
RelMor fst(const Rel& r, const Rel& s);
RelMor snd(const Rel& r, const Rel& s);
RelMor pairing(const RelMor& m, const RelMor& n);
RelMor prod_map(const RelMor& m, const RelMor& n);
RelMor eval(const Rel& r, const Rel& s);
RelMor curry(const RelMor& m, const Rel& t, const Rel& r);
RelMor exp_map(const RelMor& i, const RelMor& j);

// Canonical isomorphisms out of equality relations; face images are identities.
RelMor eta_unit();
RelMor eta_prod(const FinSet& a, const FinSet& b);
RelMor eta_exp(const FinSet& a, const FinSet& b);

// ---- relevant isomorphisms

enum class Policy { Strict, Rey, Crey };

const char* to_string(Policy p);
Policy parse_policy(std::string_view s);
bool relevant(Policy p, const FinFn& f);
bool relevant(Policy p, const RelMor& m);

// ---- enumeration helpers

std::vector<FinFn> all_functions(const FinSet& a, const FinSet& b);
std::vector<FinFn> all_bijections(const FinSet& a, const FinSet& b);
// All propositional relations on a x b, witness `w` on every pair.
std::vector<Rel> all_prop_relations(const FinSet& a, const FinSet& b);
// All morphisms between two relations (every compatible action choice).
std::vector<RelMor> all_rel_morphisms(const Rel& r, const Rel& s, std::size_t cap = 1u << 16);
std::vector<RelMor> all_rel_isos(const Rel& r, const Rel& s);

// ---- serialisation

nlohmann::json to_json(const FinSet& a);
nlohmann::json to_json(const FinFn& f);
nlohmann::json to_json(const Rel& r);
nlohmann::json to_json(const RelMor& m);
FinSet finset_from_json(const nlohmann::json& j);
Rel rel_from_json(const nlohmann::json& j);

}  // namespace pwb::fm
