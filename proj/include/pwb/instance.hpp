#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "pwb/finmodel.hpp"
#include "pwb/report.hpp"
#include "pwb/rgalg.hpp"

namespace pwb::fm {

// The finite-carrier model as a tabulated rg category: level 0 has the carriers
// {0..k-1} for 1 <= k <= bound and all functions between them, level 1 has every
// w-labelled relation between carriers plus the equality relations.
struct Instance {
  struct Mor1 {
    rg::Id src, tgt;  // relation ids
    rg::Id f, g;      // level-0 morphism ids
  };

  Policy policy = Policy::Rey;
  int bound = 0;
  std::vector<FinSet> sets;
  std::vector<FinFn> fns;
  std::vector<Rel> rels;
  std::vector<Mor1> mors1;
  rg::RgPtr cat;
  rg::IsoSubcategory iso;

  rg::Id set_id(const FinSet& a) const;
  rg::Id rel_id(const Rel& r) const;
  rg::Id fn_id(const FinFn& f) const;
  std::optional<rg::Id> mor1_id(rg::Id r, rg::Id s, rg::Id f, rg::Id g) const;
  RelMor rel_mor(rg::Id m) const;
  // The relation with witness w on the diagonal of a carrier.
  rg::Id diag_w(rg::Id set) const;

  std::map<std::vector<std::uint32_t>, rg::Id> fn_index;  // (src, tgt, images...) -> id
  std::map<std::tuple<rg::Id, rg::Id, rg::Id, rg::Id>, rg::Id> mor1_index;
};

using InstancePtr = std::shared_ptr<const Instance>;

InstancePtr build_instance(Policy p, int bound);

// Endofunctors of the instance that are valid under its policy: identity,
// relabelling of equality witnesses, its inverse, constants, conjugation by the
// reversal of each carrier, and binary composites of these.
std::vector<rg::FunPtr> functor_pool(const Instance& inst);

// True iff the morphism is selected by the policy.
bool relevant_iso_check(Policy p, const FinFn& f);
bool relevant_iso_check(Policy p, const RelMor& m);

// Exhaustive checks of Eq, the cartesian closed structure at both levels and the
// eta isomorphisms over carriers of size <= bound.
Report finmodel_suite(Policy p, int bound);

}  // namespace pwb::fm
