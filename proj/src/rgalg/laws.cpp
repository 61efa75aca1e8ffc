#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pwb/error.hpp"
#include "pwb/rgalg.hpp"

namespace pwb::rg {

namespace {

using Json = nlohmann::json;

Json mor_json(const FinCategory& c, int level, Id m) {
  return {{"level", level}, {"morphism", c.morphism_name(m)}, {"src", c.object_name(c.src(m))},
          {"tgt", c.object_name(c.tgt(m))}};
}

Json obj_json(const FinCategory& c, int level, Id o) { return {{"level", level}, {"object", c.object_name(o)}}; }

std::optional<std::string> tab_shape_error(const FunctorTab& t, const FinCategory& c, const FinCategory& d) {
  if (t.obj.size() != c.object_count() || t.mor.size() != c.morphism_count()) return "table size mismatch";
  for (Id o : t.obj)
    if (o >= d.object_count()) return "dangling object id " + std::to_string(o);
  for (Id m : t.mor)
    if (m >= d.morphism_count()) return "dangling morphism id " + std::to_string(m);
  return std::nullopt;
}

// Returns a counterexample when t is not a functor c -> d.
std::optional<Json> functor_violation(const FunctorTab& t, const FinCategory& c, const FinCategory& d, int lc, int ld) {
  for (Id m = 0; m < c.morphism_count(); ++m) {
    Id fm = t.mor[m];
    if (d.src(fm) != t.obj[c.src(m)] || d.tgt(fm) != t.obj[c.tgt(m)])
      return Json{{"kind", "typing"}, {"at", mor_json(c, lc, m)}, {"image", mor_json(d, ld, fm)}};
  }
  for (Id o = 0; o < c.object_count(); ++o)
    if (t.mor[c.identity(o)] != d.identity(t.obj[o])) return Json{{"kind", "identity"}, {"at", obj_json(c, lc, o)}};
  for (Id f = 0; f < c.morphism_count(); ++f)
    for (Id g : c.out(c.tgt(f))) {
      auto h = c.compose(g, f);
      if (!h) continue;
      auto dh = d.compose(t.mor[g], t.mor[f]);
      if (!dh || *dh != t.mor[*h])
        return Json{{"kind", "composition"}, {"f", mor_json(c, lc, f)}, {"g", mor_json(c, lc, g)}};
    }
  return std::nullopt;
}

}  // namespace

Report validate_rg(const RgCategory& x, const IsoSubcategory& m) {
  Report r;
  std::vector<std::string> errs;
  for (int l = 0; l < 2; ++l)
    for (auto& e : x.level[l].malformations()) errs.push_back("level " + std::to_string(l) + ": " + e);
  if (errs.empty()) {
    if (auto e = tab_shape_error(x.face_top, x.level[1], x.level[0])) errs.push_back("face_top: " + *e);
    if (auto e = tab_shape_error(x.face_bot, x.level[1], x.level[0])) errs.push_back("face_bot: " + *e);
    if (auto e = tab_shape_error(x.degen, x.level[0], x.level[1])) errs.push_back("degen: " + *e);
    for (int l = 0; l < 2; ++l)
      if (m.selected[l].size() != x.level[l].morphism_count())
        errs.push_back("relevant-iso selection has the wrong size at level " + std::to_string(l));
  }
  if (!errs.empty()) {
    r.fail("rg.malformed", "rg.instance", Json{{"errors", errs}}, "instance rejected before law checks");
    return r;
  }

  for (int l = 0; l < 2; ++l) {
    const FinCategory& c = x.level[l];
    std::optional<Json> unit_cex, assoc_cex;
    for (Id f = 0; f < c.morphism_count() && !unit_cex; ++f) {
      if (c.compose(f, c.identity(c.src(f))) != f || c.compose(c.identity(c.tgt(f)), f) != f)
        unit_cex = mor_json(c, l, f);
    }
    for (Id f = 0; f < c.morphism_count() && !assoc_cex; ++f)
      for (Id g : c.out(c.tgt(f))) {
        auto gf = c.compose(g, f);
        for (Id h : c.out(c.tgt(g))) {
          auto hg = c.compose(h, g);
          auto left = gf ? c.compose(h, *gf) : std::nullopt;
          auto right = hg ? c.compose(*hg, f) : std::nullopt;
          if (left != right || !left) {
            assoc_cex = Json{{"f", mor_json(c, l, f)}, {"g", mor_json(c, l, g)}, {"h", mor_json(c, l, h)}};
            break;
          }
        }
        if (assoc_cex) break;
      }
    std::string lv = "rg.level" + std::to_string(l);
    r.check(!unit_cex, lv + ".identity", "category.identity", unit_cex.value_or(nullptr));
    r.check(!assoc_cex, lv + ".assoc", "category.assoc", assoc_cex.value_or(nullptr));
  }

  auto ft = functor_violation(x.face_top, x.level[1], x.level[0], 1, 0);
  auto fb = functor_violation(x.face_bot, x.level[1], x.level[0], 1, 0);
  auto dg = functor_violation(x.degen, x.level[0], x.level[1], 0, 1);
  r.check(!ft, "rg.face_top.functor", "rg.faces", ft.value_or(nullptr));
  r.check(!fb, "rg.face_bot.functor", "rg.faces", fb.value_or(nullptr));
  r.check(!dg, "rg.degen.functor", "rg.degeneracy", dg.value_or(nullptr));

  std::optional<Json> sec;
  for (Id a = 0; a < x.level[0].object_count() && !sec; ++a)
    if (x.face_top.obj[x.degen.obj[a]] != a || x.face_bot.obj[x.degen.obj[a]] != a) sec = obj_json(x.level[0], 0, a);
  for (Id u = 0; u < x.level[0].morphism_count() && !sec; ++u)
    if (x.face_top.mor[x.degen.mor[u]] != u || x.face_bot.mor[x.degen.mor[u]] != u) sec = mor_json(x.level[0], 0, u);
  r.check(!sec, "rg.face_degen_section", "rg.section", sec.value_or(nullptr));

  if (x.face_mode == FaceMode::Formal) {
    r.pass("rg.faces_distinct", "rg.faces", "faces declared distinct (formal mode)");
  } else {
    bool distinct = !(x.face_top == x.face_bot);
    r.check(distinct, "rg.faces_distinct", "rg.faces", Json{{"reason", "face tables coincide"}});
  }

  auto count = generated_map_count(x);
  r.check(count == 7, "rg.seven_maps", "rg.shape", Json{{"generated_maps", count}},
          std::to_string(count) + " generated maps");

  std::set<Id> seen;
  bool faithful = true;
  for (Id u : x.degen.mor) faithful = seen.insert(u).second && faithful;
  r.check(faithful, "rg.degen_faithful", "rg.degeneracy", Json{{"reason", "degeneracy identifies two morphisms"}});

  // relevant-iso subcategory
  std::optional<Json> wide, closed, inv, faces, degen;
  for (int l = 0; l < 2; ++l) {
    const FinCategory& c = x.level[l];
    const auto& sel = m.selected[l];
    for (Id o = 0; o < c.object_count() && !wide; ++o)
      if (!sel[c.identity(o)]) wide = obj_json(c, l, o);
    for (Id f = 0; f < c.morphism_count(); ++f) {
      if (!sel[f]) continue;
      for (Id g : c.out(c.tgt(f))) {
        if (!sel[g] || closed) continue;
        auto h = c.compose(g, f);
        if (!h || !sel[*h]) closed = Json{{"f", mor_json(c, l, f)}, {"g", mor_json(c, l, g)}};
      }
      if (!inv) {
        bool found = false;
        for (Id g : c.hom(c.tgt(f), c.src(f)))
          if (sel[g] && c.compose(g, f) == c.identity(c.src(f)) && c.compose(f, g) == c.identity(c.tgt(f))) {
            found = true;
            break;
          }
        if (!found) inv = mor_json(c, l, f);
      }
      if (l == 1 && !faces && (!m.selected[0][x.face_top.mor[f]] || !m.selected[0][x.face_bot.mor[f]]))
        faces = mor_json(c, l, f);
      if (l == 0 && !degen && !m.selected[1][x.degen.mor[f]]) degen = mor_json(c, l, f);
    }
  }
  r.check(!wide, "rg.iso.wide", "iso.subcategory", wide.value_or(nullptr));
  r.check(!closed, "rg.iso.closed", "iso.subcategory", closed.value_or(nullptr));
  r.check(!inv, "rg.iso.inverses", "iso.subcategory", inv.value_or(nullptr));
  r.check(!faces, "rg.iso.faces", "iso.subcategory", faces.value_or(nullptr));
  r.check(!degen, "rg.iso.degen", "iso.subcategory", degen.value_or(nullptr));
  return r;
}

std::size_t generated_map_count(const RgCategory& x) {
  if (x.face_mode == FaceMode::Formal) {
    // words over t, b, d read right to left, reduced by face . degen = id
    struct W {
      int from, to;
      std::string w;
    };
    std::vector<W> maps{{0, 0, ""}, {1, 1, ""}, {1, 0, "t"}, {1, 0, "b"}, {0, 1, "d"}};
    auto reduce = [](std::string s) {
      for (;;) {
        auto p = s.find("td");
        auto q = s.find("bd");
        auto k = std::min(p, q);
        if (k == std::string::npos) return s;
        s.erase(k, 2);
      }
    };
    for (bool grew = true; grew;) {
      grew = false;
      auto snapshot = maps;
      for (const auto& p : snapshot)
        for (const auto& q : snapshot) {
          if (p.to != q.from) continue;
          W c{p.from, q.to, reduce(q.w + p.w)};
          bool have = std::any_of(maps.begin(), maps.end(),
                                  [&](const W& e) { return e.from == c.from && e.to == c.to && e.w == c.w; });
          if (!have && maps.size() < 64) {
            maps.push_back(c);
            grew = true;
          }
        }
    }
    return maps.size();
  }
  struct M {
    int from, to;
    FunctorTab t;
  };
  std::vector<M> maps{{0, 0, identity_tab(x.level[0])},
                      {1, 1, identity_tab(x.level[1])},
                      {1, 0, x.face_top},
                      {1, 0, x.face_bot},
                      {0, 1, x.degen}};
  auto have = [&](const M& c) {
    return std::any_of(maps.begin(), maps.end(),
                       [&](const M& e) { return e.from == c.from && e.to == c.to && e.t == c.t; });
  };
  std::vector<M> uniq;
  for (auto& mp : maps)
    if (std::none_of(uniq.begin(), uniq.end(),
                     [&](const M& e) { return e.from == mp.from && e.to == mp.to && e.t == mp.t; }))
      uniq.push_back(mp);
  maps = uniq;
  for (bool grew = true; grew;) {
    grew = false;
    auto snapshot = maps;
    for (const auto& p : snapshot)
      for (const auto& q : snapshot) {
        if (p.to != q.from) continue;
        M c{p.from, q.to, compose(q.t, p.t)};
        if (!have(c) && maps.size() < 64) {
          maps.push_back(std::move(c));
          grew = true;
        }
      }
  }
  return maps.size();
}

Report validate_functor(const RgFunctorTab& F, const IsoSubcategory& mdom, const IsoSubcategory& mcod) {
  Report r;
  const RgCategory& X = *F.dom;
  const RgCategory& Y = *F.cod;
  std::vector<std::string> errs;
  for (int l = 0; l < 2; ++l)
    if (auto e = tab_shape_error(F.f[l], X.level[l], Y.level[l])) errs.push_back("level " + std::to_string(l) + ": " + *e);
  if (F.eps.size() != X.level[0].object_count()) errs.push_back("epsilon table has the wrong size");
  for (Id e : F.eps)
    if (e >= Y.level[1].morphism_count()) errs.push_back("epsilon entry is a dangling id");
  if (!errs.empty()) {
    r.fail("rg.functor.malformed", "rg.functor", Json{{"functor", F.name}, {"errors", errs}});
    return r;
  }
  for (int l = 0; l < 2; ++l) {
    auto v = functor_violation(F.f[l], X.level[l], Y.level[l], l, l);
    r.check(!v, "rg.functor.level" + std::to_string(l), "rg.functor", v ? Json{{"functor", F.name}, {"cex", *v}} : Json());
  }
  std::optional<Json> face;
  for (Id o = 0; o < X.level[1].object_count() && !face; ++o)
    if (Y.face_top.obj[F.f[1].obj[o]] != F.f[0].obj[X.face_top.obj[o]] ||
        Y.face_bot.obj[F.f[1].obj[o]] != F.f[0].obj[X.face_bot.obj[o]])
      face = obj_json(X.level[1], 1, o);
  for (Id m = 0; m < X.level[1].morphism_count() && !face; ++m)
    if (Y.face_top.mor[F.f[1].mor[m]] != F.f[0].mor[X.face_top.mor[m]] ||
        Y.face_bot.mor[F.f[1].mor[m]] != F.f[0].mor[X.face_bot.mor[m]])
      face = mor_json(X.level[1], 1, m);
  r.check(!face, "rg.functor.faces", "rg.functor", face ? Json{{"functor", F.name}, {"at", *face}} : Json());

  std::optional<Json> rel;
  for (int l = 0; l < 2 && !rel; ++l)
    for (Id m = 0; m < X.level[l].morphism_count(); ++m)
      if (mdom.selected[l][m] && !mcod.selected[l][F.f[l].mor[m]]) {
        rel = mor_json(X.level[l], l, m);
        break;
      }
  r.check(!rel, "rg.functor.relevant", "rg.functor", rel ? Json{{"functor", F.name}, {"at", *rel}} : Json());

  std::optional<Json> et, er, ef, en;
  const FinCategory& Y1 = Y.level[1];
  for (Id a = 0; a < X.level[0].object_count(); ++a) {
    Id e = F.eps[a];
    Id want_src = Y.degen.obj[F.f[0].obj[a]];
    Id want_tgt = F.f[1].obj[X.degen.obj[a]];
    auto here = [&] {
      return Json{{"functor", F.name}, {"object", X.level[0].object_name(a)}, {"eps", Y1.morphism_name(e)}};
    };
    if (Y1.src(e) != want_src || Y1.tgt(e) != want_tgt) {
      if (!et) et = here();
      continue;
    }
    if (!mcod.selected[1][e] && !er) er = here();
    Id id0 = Y.level[0].identity(F.f[0].obj[a]);
    if ((Y.face_top.mor[e] != id0 || Y.face_bot.mor[e] != id0) && !ef) ef = here();
  }
  if (!et) {
    for (Id u = 0; u < X.level[0].morphism_count() && !en; ++u) {
      Id a = X.level[0].src(u), b = X.level[0].tgt(u);
      auto lhs = Y1.compose(F.eps[b], Y.degen.mor[F.f[0].mor[u]]);
      auto rhs = Y1.compose(F.f[1].mor[X.degen.mor[u]], F.eps[a]);
      if (!lhs || lhs != rhs) en = Json{{"functor", F.name}, {"along", mor_json(X.level[0], 0, u)}};
    }
  }
  r.check(!et, "rg.functor.eps.typed", "rg.functor.eps", et.value_or(nullptr));
  r.check(!er, "rg.functor.eps.relevant", "rg.functor.eps", er.value_or(nullptr));
  r.check(!ef, "rg.functor.eps.faces", "rg.functor.eps", ef.value_or(nullptr));
  if (et)
    r.skip("rg.functor.eps.natural", "rg.functor.eps", "epsilon is ill-typed");
  else
    r.check(!en, "rg.functor.eps.natural", "rg.functor.eps", en.value_or(nullptr));
  return r;
}

Report validate_nat(const RgNatTab& n, const IsoSubcategory& mcod) {
  (void)mcod;
  Report r;
  const RgFunctorTab& F = *n.src;
  const RgFunctorTab& G = *n.tgt;
  const RgCategory& X = *F.dom;
  const RgCategory& Y = *F.cod;
  std::string name = F.name + " => " + G.name;
  for (int l = 0; l < 2; ++l) {
    if (n.eta[l].size() != X.level[l].object_count()) {
      r.fail("rg.nat.malformed", "rg.nat", Json{{"nat", name}, {"level", l}});
      return r;
    }
    for (Id e : n.eta[l])
      if (e >= Y.level[l].morphism_count()) {
        r.fail("rg.nat.malformed", "rg.nat", Json{{"nat", name}, {"level", l}, {"dangling", e}});
        return r;
      }
  }
  std::optional<Json> typed, natural;
  for (int l = 0; l < 2; ++l) {
    const FinCategory& C = X.level[l];
    const FinCategory& D = Y.level[l];
    for (Id o = 0; o < C.object_count() && !typed; ++o)
      if (D.src(n.eta[l][o]) != F.f[l].obj[o] || D.tgt(n.eta[l][o]) != G.f[l].obj[o])
        typed = Json{{"nat", name}, {"at", obj_json(C, l, o)}, {"component", D.morphism_name(n.eta[l][o])}};
    if (typed) break;
    for (Id u = 0; u < C.morphism_count() && !natural; ++u) {
      auto lhs = D.compose(G.f[l].mor[u], n.eta[l][C.src(u)]);
      auto rhs = D.compose(n.eta[l][C.tgt(u)], F.f[l].mor[u]);
      if (!lhs || lhs != rhs) natural = Json{{"nat", name}, {"along", mor_json(C, l, u)}};
    }
  }
  r.check(!typed, "rg.nat.typed", "rg.nat", typed.value_or(nullptr));
  if (typed) return r;
  r.check(!natural, "rg.nat.natural", "rg.nat", natural.value_or(nullptr));

  std::optional<Json> face, degen;
  for (Id o = 0; o < X.level[1].object_count() && !face; ++o) {
    Id e = n.eta[1][o];
    if (Y.face_top.mor[e] != n.eta[0][X.face_top.obj[o]] || Y.face_bot.mor[e] != n.eta[0][X.face_bot.obj[o]])
      face = Json{{"nat", name}, {"at", obj_json(X.level[1], 1, o)}};
  }
  const FinCategory& Y1 = Y.level[1];
  for (Id a = 0; a < X.level[0].object_count() && !degen; ++a) {
    auto lhs = Y1.compose(n.eta[1][X.degen.obj[a]], F.eps[a]);
    auto rhs = Y1.compose(G.eps[a], Y.degen.mor[n.eta[0][a]]);
    if (!lhs || lhs != rhs) degen = Json{{"nat", name}, {"at", obj_json(X.level[0], 0, a)}};
  }
  r.check(!face, "rg.nat.faces", "rg.nat", face.value_or(nullptr));
  r.check(!degen, "rg.nat.degeneracy", "rg.nat", degen.value_or(nullptr));
  return r;
}

std::vector<RgNatTab> enumerate_nats(const FunPtr& F, const FunPtr& G, std::size_t cap) {
  std::vector<RgNatTab> out;
  if (F->dom != G->dom || F->cod != G->cod) return out;
  const RgCategory& X = *F->dom;
  const RgCategory& Y = *F->cod;

  // morphisms u : a -> b of level l grouped by max(a, b) so that they can be checked
  // as soon as both endpoints are assigned
  auto group = [](const FinCategory& c) {
    std::vector<std::vector<Id>> g(c.object_count());
    for (Id u = 0; u < c.morphism_count(); ++u) g[std::max(c.src(u), c.tgt(u))].push_back(u);
    return g;
  };
  auto g0 = group(X.level[0]);
  auto g1 = group(X.level[1]);

  std::vector<Id> eta0(X.level[0].object_count()), eta1(X.level[1].object_count());

  auto ok_at = [&](int l, Id o, const std::vector<Id>& eta, const std::vector<std::vector<Id>>& grp) {
    const FinCategory& C = X.level[l];
    const FinCategory& D = Y.level[l];
    for (Id u : grp[o]) {
      auto lhs = D.compose(G->f[l].mor[u], eta[C.src(u)]);
      auto rhs = D.compose(eta[C.tgt(u)], F->f[l].mor[u]);
      if (!lhs || lhs != rhs) return false;
    }
    return true;
  };

  std::vector<std::vector<Id>> degen_of(X.level[1].object_count());
  for (Id a = 0; a < X.level[0].object_count(); ++a) degen_of[X.degen.obj[a]].push_back(a);

  std::function<void(Id)> level1 = [&](Id o) {
    if (out.size() >= cap) return;
    if (o == X.level[1].object_count()) {
      RgNatTab n;
      n.src = F;
      n.tgt = G;
      n.eta[0] = eta0;
      n.eta[1] = eta1;
      out.push_back(std::move(n));
      return;
    }
    for (Id m : Y.level[1].hom(F->f[1].obj[o], G->f[1].obj[o])) {
      if (Y.face_top.mor[m] != eta0[X.face_top.obj[o]] || Y.face_bot.mor[m] != eta0[X.face_bot.obj[o]]) continue;
      bool sq = true;
      for (Id a : degen_of[o]) {
        auto lhs = Y.level[1].compose(m, F->eps[a]);
        auto rhs = Y.level[1].compose(G->eps[a], Y.degen.mor[eta0[a]]);
        if (!lhs || lhs != rhs) sq = false;
      }
      if (!sq) continue;
      eta1[o] = m;
      if (ok_at(1, o, eta1, g1)) level1(o + 1);
    }
  };

  std::function<void(Id)> level0 = [&](Id o) {
    if (out.size() >= cap) return;
    if (o == X.level[0].object_count()) {
      level1(0);
      return;
    }
    for (Id m : Y.level[0].hom(F->f[0].obj[o], G->f[0].obj[o])) {
      eta0[o] = m;
      if (ok_at(0, o, eta0, g0)) level0(o + 1);
    }
  };
  level0(0);
  return out;
}

Report law_suite(const std::vector<FunPtr>& pool, const IsoSubcategory& m, const LawSuiteOptions& opt) {
  Report r;
  if (pool.empty()) {
    r.skip("rg.laws", "rg.2cat", "empty functor pool");
    return r;
  }
  std::mt19937_64 rng(opt.seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto fun = [&] { return pool[pick(pool.size())]; };

  Tally valid{"rg.pool.valid", "rg.functor"};
  for (const auto& f : pool) {
    Report v = validate_functor(*f, m, m);
    valid.record(v.ok(), [&] {
      const auto* c = v.first_failure();
      return Json{{"functor", f->name}, {"law", c->law}, {"cex", c->counterexample}};
    });
  }

  std::map<std::pair<const RgFunctorTab*, const RgFunctorTab*>, std::vector<RgNatTab>> cache;
  auto nats = [&](const FunPtr& a, const FunPtr& b) -> const std::vector<RgNatTab>& {
    auto key = std::make_pair(a.get(), b.get());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, enumerate_nats(a, b, 64)).first;
    return it->second;
  };
  auto nat_of = [&](const FunPtr& a, const FunPtr& b) -> std::optional<RgNatTab> {
    const auto& ns = nats(a, b);
    if (ns.empty()) return std::nullopt;
    return ns[pick(ns.size())];
  };

  Tally funit{"rg.functor.unit", "rg.2cat.functor"}, fassoc{"rg.functor.assoc", "rg.2cat.functor"};
  Tally nunit{"rg.nat.unit", "rg.2cat.nat"}, nassoc{"rg.nat.assoc", "rg.2cat.nat"};
  Tally wright{"rg.whisker_right.functorial", "rg.2cat.whisker"}, wleft{"rg.whisker_left.functorial", "rg.2cat.whisker"};
  Tally cvalid{"rg.composite.valid", "rg.2cat.functor"}, nvalid{"rg.nat.valid", "rg.nat"};

  const auto id = identity_functor(pool[0]->dom);
  auto name_json = [](std::initializer_list<const FunPtr*> fs) {
    Json j = Json::array();
    for (auto* f : fs) j.push_back((*f)->name);
    return j;
  };

  for (std::size_t s = 0; s < opt.samples; ++s) {
    FunPtr F = fun(), G = fun(), H = fun();
    funit.record(same_functor(*compose_functor(F, id), *F) && same_functor(*compose_functor(id, F), *F),
                 [&] { return Json{{"functors", name_json({&F})}}; });
    FunPtr GF = compose_functor(G, F);
    fassoc.record(same_functor(*compose_functor(H, GF), *compose_functor(compose_functor(H, G), F)),
                  [&] { return Json{{"functors", name_json({&F, &G, &H})}}; });
    Report cv = validate_functor(*GF, m, m);
    cvalid.record(cv.ok(), [&] { return Json{{"functor", GF->name}, {"law", cv.first_failure()->law}}; });

    // vertical structure: eta : F => G, theta : G => H, kappa : H => K
    FunPtr K = fun();
    auto eta = nat_of(F, G);
    if (!eta) {
      G = F;
      eta = nat_of(F, G);
    }
    auto theta = nat_of(G, H);
    if (!theta) {
      H = G;
      theta = nat_of(G, H);
    }
    auto kappa = nat_of(H, K);
    if (!kappa) {
      K = H;
      kappa = nat_of(H, K);
    }
    if (!eta || !theta || !kappa) {
      ++nunit.skipped;
      continue;
    }
    Report nv = validate_nat(*eta, m);
    nvalid.record(nv.ok(), [&] { return Json{{"nat", F->name + " => " + G->name}, {"law", nv.first_failure()->law}}; });
    nunit.record(same_nat(compose_nat(*eta, identity_nat(F)), *eta) &&
                     same_nat(compose_nat(identity_nat(G), *eta), *eta),
                 [&] { return Json{{"functors", name_json({&F, &G})}}; });
    nassoc.record(same_nat(compose_nat(*kappa, compose_nat(*theta, *eta)),
                           compose_nat(compose_nat(*kappa, *theta), *eta)),
                  [&] { return Json{{"functors", name_json({&F, &G, &H, &K})}}; });

    // whiskering along a fourth functor W
    FunPtr W = fun();
    bool right_ok =
        same_nat(whisker_right(identity_nat(G), W), identity_nat(compose_functor(G, W))) &&
        same_nat(whisker_right(compose_nat(*theta, *eta), W),
                 compose_nat(whisker_right(*theta, W), whisker_right(*eta, W)));
    wright.record(right_ok, [&] { return Json{{"functors", name_json({&F, &G, &H, &W})}}; });
    bool left_ok =
        same_nat(whisker_left(W, identity_nat(G)), identity_nat(compose_functor(W, G))) &&
        same_nat(whisker_left(W, compose_nat(*theta, *eta)),
                 compose_nat(whisker_left(W, *theta), whisker_left(W, *eta)));
    wleft.record(left_ok, [&] { return Json{{"functors", name_json({&F, &G, &H, &W})}}; });
    Report wv = validate_nat(whisker_left(W, *eta), m);
    nvalid.record(wv.ok(), [&] { return Json{{"nat", "whiskered"}, {"law", wv.first_failure()->law}}; });
  }
  for (const Tally* t : {&valid, &funit, &fassoc, &cvalid, &nunit, &nassoc, &wright, &wleft, &nvalid}) t->emit(r);
  return r;
}

Mutation mutate_eps(RgFunctorTab& f, std::mt19937_64& rng) {
  Mutation mu;
  std::size_t n = f.cod->level[1].morphism_count();
  if (f.eps.empty() || n < 2) return mu;
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, f.eps.size() - 1)(rng);
  Id old = f.eps[i];
  Id v = static_cast<Id>(std::uniform_int_distribution<std::size_t>(0, n - 2)(rng));
  if (v >= old) ++v;
  f.eps[i] = v;
  mu.where = f.name + ".eps[" + f.dom->level[0].object_name(static_cast<Id>(i)) + "]: " +
             f.cod->level[1].morphism_name(old) + " -> " + f.cod->level[1].morphism_name(v);
  mu.applied = true;
  return mu;
}

Mutation mutate_nat(RgNatTab& nt, std::mt19937_64& rng) {
  Mutation mu;
  int l = static_cast<int>(std::uniform_int_distribution<int>(0, 1)(rng));
  const FinCategory& D = nt.src->cod->level[l];
  if (nt.eta[l].empty() || D.morphism_count() < 2) return mu;
  std::size_t i = std::uniform_int_distribution<std::size_t>(0, nt.eta[l].size() - 1)(rng);
  Id old = nt.eta[l][i];
  Id v = static_cast<Id>(std::uniform_int_distribution<std::size_t>(0, D.morphism_count() - 2)(rng));
  if (v >= old) ++v;
  nt.eta[l][i] = v;
  mu.where = "eta" + std::to_string(l) + "[" + nt.src->dom->level[l].object_name(static_cast<Id>(i)) + "]: " +
             D.morphism_name(old) + " -> " + D.morphism_name(v);
  mu.applied = true;
  return mu;
}

}  // namespace pwb::rg
