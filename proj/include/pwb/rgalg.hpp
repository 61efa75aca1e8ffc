#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwb/report.hpp"

namespace pwb::rg {

using Id = std::uint32_t;

// Finite category with dense object and morphism ids.
class FinCategory {
 public:
  Id add_object(std::string name = {});
  Id add_morphism(Id src, Id tgt, std::string name = {});
  void set_identity(Id obj, Id mor);
  // Must be called after all morphisms have been added.
  void finalize_shape();
  void set_compose(Id g, Id f, Id h);  // g . f = h

  std::size_t object_count() const { return obj_names_.size(); }
  std::size_t morphism_count() const { return src_.size(); }
  Id src(Id m) const { return src_.at(m); }
  Id tgt(Id m) const { return tgt_.at(m); }
  Id identity(Id obj) const { return ident_.at(obj); }
  std::optional<Id> compose(Id g, Id f) const;
  const std::vector<Id>& out(Id obj) const { return out_.at(obj); }
  std::vector<Id> hom(Id a, Id b) const;

  const std::string& object_name(Id o) const { return obj_names_.at(o); }
  const std::string& morphism_name(Id m) const { return mor_names_.at(m); }

  // Structural sanity: ids in range, identities typed, compose typed where set.
  std::vector<std::string> malformations() const;

 private:
  std::vector<std::string> obj_names_, mor_names_;
  std::vector<Id> src_, tgt_, ident_;
  std::vector<std::vector<Id>> out_;
  std::vector<std::uint32_t> pos_;              // position of a morphism in out(src)
  std::vector<std::vector<std::int64_t>> comp_; // comp_[f][pos_[g]] = g . f, or -1
};

struct FunctorTab {
  std::vector<Id> obj;
  std::vector<Id> mor;
  friend bool operator==(const FunctorTab&, const FunctorTab&) = default;
};

FunctorTab compose(const FunctorTab& g, const FunctorTab& f);
FunctorTab identity_tab(const FinCategory& c);

enum class FaceMode { Tables, Formal };

struct RgCategory {
  FinCategory level[2];
  FunctorTab face_top, face_bot;  // level 1 -> level 0
  FunctorTab degen;               // level 0 -> level 1
  FaceMode face_mode = FaceMode::Tables;
  std::string name;
  // Set when this category is a power X^n of power_base.
  std::shared_ptr<const RgCategory> power_base;
  int power_n = -1;
};

struct IsoSubcategory {
  std::vector<bool> selected[2];
};

using RgPtr = std::shared_ptr<const RgCategory>;

// X^n with faces and degeneracy acting componentwise; n = 0 gives the terminal rg
// category and n = 1 returns x itself.
RgPtr power(const RgPtr& x, int n, std::size_t max_size = 200000);
std::vector<Id> decode(const RgCategory& p, int level, Id id, bool object);
Id encode(const RgCategory& p, int level, const std::vector<Id>& parts, bool object);
IsoSubcategory power_iso(const RgCategory& p, const IsoSubcategory& m);

struct RgFunctorTab {
  RgPtr dom, cod;
  FunctorTab f[2];
  std::vector<Id> eps;  // indexed by level-0 objects of dom; morphisms of cod level 1
  std::string name;
};

struct RgNatTab {
  std::shared_ptr<const RgFunctorTab> src, tgt;
  std::vector<Id> eta[2];
};

using FunPtr = std::shared_ptr<const RgFunctorTab>;

FunPtr identity_functor(const RgPtr& x);
FunPtr compose_functor(const FunPtr& g, const FunPtr& f);
FunPtr projection(const RgPtr& p, int i);
FunPtr tuple(const std::vector<FunPtr>& fs, const RgPtr& target);
RgNatTab identity_nat(const FunPtr& f);
RgNatTab compose_nat(const RgNatTab& theta, const RgNatTab& eta);  // theta after eta
RgNatTab whisker_right(const RgNatTab& eta, const FunPtr& f);      // eta . F
RgNatTab whisker_left(const FunPtr& g, const RgNatTab& eta);       // G . eta
RgNatTab tuple_nat(const std::vector<RgNatTab>& etas, const FunPtr& src, const FunPtr& tgt);

bool same_functor(const RgFunctorTab& a, const RgFunctorTab& b);
bool same_nat(const RgNatTab& a, const RgNatTab& b);

// ---- validation

Report validate_rg(const RgCategory& x, const IsoSubcategory& m);
Report validate_functor(const RgFunctorTab& f, const IsoSubcategory& mdom, const IsoSubcategory& mcod);
Report validate_nat(const RgNatTab& n, const IsoSubcategory& mcod);
// Number of distinct maps generated by faces and degeneracy between the two levels
// (identities included); the reflexive-graph shape requires exactly seven.
std::size_t generated_map_count(const RgCategory& x);

// All natural transformations between two unary functors (level 1 components are
// searched as well, so proof-relevant instances are handled).
std::vector<RgNatTab> enumerate_nats(const FunPtr& f, const FunPtr& g, std::size_t cap = 4096);

// ---- law suite

struct LawSuiteOptions {
  std::size_t samples = 200;
  std::uint64_t seed = 1;
};

// Checks the 2-categorical laws on random functors/nats from the pool.
Report law_suite(const std::vector<FunPtr>& pool, const IsoSubcategory& m, const LawSuiteOptions& opt);

// ---- mutation helpers (testing the validators)

struct Mutation {
  std::string where;
  bool applied = false;
};
Mutation mutate_eps(RgFunctorTab& f, std::mt19937_64& rng);
Mutation mutate_nat(RgNatTab& n, std::mt19937_64& rng);

// ---- serialisation

nlohmann::json to_json(const RgCategory& x, const IsoSubcategory& m);
std::pair<RgCategory, IsoSubcategory> rg_from_json(const nlohmann::json& j);

}  // namespace pwb::rg
