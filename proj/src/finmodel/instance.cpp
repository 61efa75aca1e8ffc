#include <algorithm>

#include "pwb/error.hpp"
#include "pwb/instance.hpp"

namespace pwb::fm {

using rg::Id;

namespace {

std::vector<std::uint32_t> fn_key(Id src, Id tgt, const FinFn& f) {
  std::vector<std::uint32_t> k{src, tgt};
  k.insert(k.end(), f.images().begin(), f.images().end());
  return k;
}

bool maps_into(const Rel& r, const Rel& s, const FinFn& f, const FinFn& g) {
  for (const auto& e : r.entries())
    if (!s.entry_of(f.image_index(e.a), g.image_index(e.b))) return false;
  return true;
}

bool is_iso_data(const Rel& r, const Rel& s, const FinFn& f, const FinFn& g) {
  return f.is_bijection() && g.is_bijection() && r.pair_count() == s.pair_count();
}

}  // namespace

Id Instance::set_id(const FinSet& a) const {
  for (Id i = 0; i < sets.size(); ++i)
    if (sets[i] == a) return i;
  throw ModelError("carrier " + a.str() + " is not in the instance");
}

Id Instance::rel_id(const Rel& r) const {
  for (Id i = 0; i < rels.size(); ++i)
    if (rels[i] == r) return i;
  throw ModelError("relation " + r.str() + " is not in the instance");
}

Id Instance::fn_id(const FinFn& f) const {
  auto it = fn_index.find(fn_key(set_id(f.dom()), set_id(f.cod()), f));
  if (it == fn_index.end()) throw ModelError("function is not in the instance");
  return it->second;
}

std::optional<Id> Instance::mor1_id(Id r, Id s, Id f, Id g) const {
  auto it = mor1_index.find({r, s, f, g});
  if (it == mor1_index.end()) return std::nullopt;
  return it->second;
}

RelMor Instance::rel_mor(Id m) const {
  const auto& d = mors1.at(m);
  return RelMor::forced(rels[d.src], rels[d.tgt], fns[d.f], fns[d.g]);
}

Id Instance::diag_w(Id set) const {
  const FinSet& a = sets.at(set);
  std::vector<std::pair<Label, Label>> ps;
  for (const auto& x : a.elements()) ps.emplace_back(x, x);
  return rel_id(Rel::from_pairs(a, a, ps));
}

InstancePtr build_instance(Policy p, int bound) {
  if (bound < 1) throw ModelError("carrier bound must be at least 1");
  auto inst = std::make_shared<Instance>();
  inst->policy = p;
  inst->bound = bound;
  for (int k = 1; k <= bound; ++k) inst->sets.push_back(FinSet::atoms(k));

  auto rg = std::make_shared<rg::RgCategory>();
  rg->name = std::string("finmodel-") + to_string(p) + "-" + std::to_string(bound);
  auto& c0 = rg->level[0];
  auto& c1 = rg->level[1];

  // level 0
  std::vector<std::pair<Id, Id>> fn_ends;
  for (Id a = 0; a < inst->sets.size(); ++a) c0.add_object(inst->sets[a].str());
  for (Id a = 0; a < inst->sets.size(); ++a)
    for (Id b = 0; b < inst->sets.size(); ++b)
      for (auto& f : all_functions(inst->sets[a], inst->sets[b])) {
        std::string name = f.as_label().str() + ":" + inst->sets[a].str() + "->" + inst->sets[b].str();
        Id id = c0.add_morphism(a, b, name);
        inst->fn_index[fn_key(a, b, f)] = id;
        inst->fns.push_back(std::move(f));
        fn_ends.emplace_back(a, b);
      }
  for (Id a = 0; a < inst->sets.size(); ++a) c0.set_identity(a, inst->fn_id(FinFn::identity(inst->sets[a])));
  c0.finalize_shape();
  for (Id f = 0; f < inst->fns.size(); ++f)
    for (Id g : c0.out(fn_ends[f].second)) c0.set_compose(g, f, inst->fn_id(compose(inst->fns[g], inst->fns[f])));

  // level 1
  for (Id a = 0; a < inst->sets.size(); ++a)
    for (Id b = 0; b < inst->sets.size(); ++b)
      for (auto& r : all_prop_relations(inst->sets[a], inst->sets[b])) inst->rels.push_back(std::move(r));
  for (const auto& a : inst->sets) inst->rels.push_back(eq(a));
  auto set_of = [&](const FinSet& s) { return inst->set_id(s); };
  std::vector<Id> rdom, rcod;
  for (const auto& r : inst->rels) {
    c1.add_object(r.str());
    rdom.push_back(set_of(r.dom()));
    rcod.push_back(set_of(r.cod()));
  }
  for (Id r = 0; r < inst->rels.size(); ++r)
    for (Id s = 0; s < inst->rels.size(); ++s)
      for (Id f : c0.hom(rdom[r], rdom[s]))
        for (Id g : c0.hom(rcod[r], rcod[s])) {
          if (!maps_into(inst->rels[r], inst->rels[s], inst->fns[f], inst->fns[g])) continue;
          Id id = c1.add_morphism(r, s, "m" + std::to_string(inst->mors1.size()));
          inst->mor1_index[{r, s, f, g}] = id;
          inst->mors1.push_back({r, s, f, g});
        }
  for (Id r = 0; r < inst->rels.size(); ++r)
    c1.set_identity(r, *inst->mor1_id(r, r, c0.identity(rdom[r]), c0.identity(rcod[r])));
  c1.finalize_shape();
  for (Id m = 0; m < inst->mors1.size(); ++m) {
    const auto& x = inst->mors1[m];
    for (Id n : c1.out(x.tgt)) {
      const auto& y = inst->mors1[n];
      auto h = inst->mor1_id(x.src, y.tgt, *c0.compose(y.f, x.f), *c0.compose(y.g, x.g));
      c1.set_compose(n, m, *h);
    }
  }

  // faces and degeneracy
  for (Id r = 0; r < inst->rels.size(); ++r) {
    rg->face_top.obj.push_back(rdom[r]);
    rg->face_bot.obj.push_back(rcod[r]);
  }
  for (const auto& m : inst->mors1) {
    rg->face_top.mor.push_back(m.f);
    rg->face_bot.mor.push_back(m.g);
  }
  for (Id a = 0; a < inst->sets.size(); ++a) rg->degen.obj.push_back(inst->rel_id(eq(inst->sets[a])));
  for (Id f = 0; f < inst->fns.size(); ++f) {
    Id ea = rg->degen.obj[fn_ends[f].first], eb = rg->degen.obj[fn_ends[f].second];
    rg->degen.mor.push_back(*inst->mor1_id(ea, eb, f, f));
  }

  // relevant isomorphisms
  inst->iso.selected[0].assign(inst->fns.size(), false);
  for (Id f = 0; f < inst->fns.size(); ++f) inst->iso.selected[0][f] = relevant(p, inst->fns[f]);
  inst->iso.selected[1].assign(inst->mors1.size(), false);
  for (Id m = 0; m < inst->mors1.size(); ++m) {
    const auto& d = inst->mors1[m];
    bool iso = is_iso_data(inst->rels[d.src], inst->rels[d.tgt], inst->fns[d.f], inst->fns[d.g]);
    bool sel = false;
    switch (p) {
      case Policy::Strict: sel = m == c1.identity(d.src); break;
      case Policy::Rey: sel = iso && inst->fns[d.f].is_identity() && inst->fns[d.g].is_identity(); break;
      case Policy::Crey: sel = iso; break;
    }
    inst->iso.selected[1][m] = sel;
  }
  inst->cat = rg;
  return inst;
}

// ---- functor pool

namespace {

// Builds a functor from its object maps; morphisms are mapped through their
// endpoints, which is possible because every level-1 morphism is determined by
// its boundary.
rg::FunPtr make_functor(const InstancePtr& keep, const Instance& inst, std::string name, const std::vector<Id>& obj0,
                        const std::function<Id(Id)>& mor0, const std::vector<Id>& obj1, const std::vector<Id>& eps) {
  (void)keep;
  auto f = std::make_shared<rg::RgFunctorTab>();
  f->dom = inst.cat;
  f->cod = inst.cat;
  f->name = std::move(name);
  f->f[0].obj = obj0;
  for (Id m = 0; m < inst.fns.size(); ++m) f->f[0].mor.push_back(mor0(m));
  f->f[1].obj = obj1;
  for (const auto& m : inst.mors1) {
    auto id = inst.mor1_id(obj1[m.src], obj1[m.tgt], f->f[0].mor[m.f], f->f[0].mor[m.g]);
    if (!id) return nullptr;
    f->f[1].mor.push_back(*id);
  }
  f->eps = eps;
  return f;
}

}  // namespace

std::vector<rg::FunPtr> functor_pool(const Instance& inst) {
  std::vector<rg::FunPtr> base;
  const auto& c0 = inst.cat->level[0];
  const auto& c1 = inst.cat->level[1];
  const auto& degen = inst.cat->degen;
  const Id nsets = static_cast<Id>(inst.sets.size());
  std::vector<Id> id0(nsets), id1(inst.rels.size());
  for (Id a = 0; a < nsets; ++a) id0[a] = a;
  for (Id r = 0; r < inst.rels.size(); ++r) id1[r] = r;
  auto same_mor = [](Id m) { return m; };
  bool relabel_ok = inst.policy != Policy::Strict;

  base.push_back(rg::identity_functor(inst.cat));

  // relabel: Eq(A) -> diagonal with witness w
  {
    std::vector<Id> obj1 = id1, eps;
    for (Id a = 0; a < nsets; ++a) obj1[degen.obj[a]] = inst.diag_w(a);
    for (Id a = 0; a < nsets; ++a)
      eps.push_back(*inst.mor1_id(degen.obj[a], inst.diag_w(a), c0.identity(a), c0.identity(a)));
    if (relabel_ok)
      if (auto f = make_functor(nullptr, inst, "relabel", id0, same_mor, obj1, eps)) base.push_back(f);
  }
  // expand: diagonal with witness w -> Eq(A)
  {
    std::vector<Id> obj1 = id1, eps;
    for (Id a = 0; a < nsets; ++a) obj1[inst.diag_w(a)] = degen.obj[a];
    for (Id a = 0; a < nsets; ++a) eps.push_back(c1.identity(degen.obj[a]));
    if (auto f = make_functor(nullptr, inst, "expand", id0, same_mor, obj1, eps)) base.push_back(f);
  }
  // constants
  for (Id c = 0; c < nsets; ++c) {
    for (int variant = 0; variant < 2; ++variant) {
      if (variant == 1 && !relabel_ok) continue;
      Id target = variant == 0 ? degen.obj[c] : inst.diag_w(c);
      std::vector<Id> obj0(nsets, c), obj1(inst.rels.size(), target), eps;
      Id e = variant == 0 ? c1.identity(target) : *inst.mor1_id(degen.obj[c], target, c0.identity(c), c0.identity(c));
      eps.assign(nsets, e);
      Id idc = c0.identity(c);
      std::string name = std::string(variant == 0 ? "const" : "constw") + inst.sets[c].str();
      if (auto f = make_functor(nullptr, inst, name, obj0, [&](Id) { return idc; }, obj1, eps)) base.push_back(f);
    }
  }
  // conjugation by the reversal of each carrier
  {
    std::vector<FinFn> rev;
    for (const auto& s : inst.sets) {
      std::vector<std::uint32_t> img(s.size());
      for (std::uint32_t i = 0; i < s.size(); ++i) img[i] = static_cast<std::uint32_t>(s.size() - 1 - i);
      rev.push_back(FinFn::from_indices(s, s, img));
    }
    auto conj_fn = [&](Id m) {
      const FinFn& f = inst.fns[m];
      Id a = inst.set_id(f.dom()), b = inst.set_id(f.cod());
      return inst.fn_id(compose(rev[b], compose(f, rev[a].inverse())));
    };
    std::vector<Id> obj1(inst.rels.size()), eps;
    for (Id r = 0; r < inst.rels.size(); ++r) {
      const Rel& rel = inst.rels[r];
      Id a = inst.set_id(rel.dom()), b = inst.set_id(rel.cod());
      std::vector<Witness> ts;
      for (std::size_t k = 0; k < rel.witness_count(); ++k) {
        Witness w = rel.witness_at(k);
        Label nw = w.w.kind() == LabelKind::Refl ? Label::refl(rev[a](w.w.child(0))) : w.w;
        ts.push_back({rev[a](w.a), rev[b](w.b), nw});
      }
      obj1[r] = inst.rel_id(Rel::make(rel.dom(), rel.cod(), ts));
    }
    for (Id a = 0; a < nsets; ++a) eps.push_back(c1.identity(degen.obj[a]));
    if (auto f = make_functor(nullptr, inst, "conj", id0, conj_fn, obj1, eps)) base.push_back(f);
  }

  std::vector<rg::FunPtr> pool = base;
  for (std::size_t i = 1; i < base.size(); ++i)
    for (std::size_t j = 1; j < base.size(); ++j) {
      auto h = rg::compose_functor(base[i], base[j]);
      bool dup = std::any_of(pool.begin(), pool.end(), [&](const rg::FunPtr& x) { return rg::same_functor(*x, *h); });
      if (!dup) pool.push_back(h);
    }
  return pool;
}

bool relevant_iso_check(Policy p, const FinFn& f) { return relevant(p, f); }
bool relevant_iso_check(Policy p, const RelMor& m) { return relevant(p, m); }

}  // namespace pwb::fm
