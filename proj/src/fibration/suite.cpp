#include <algorithm>
#include <random>
#include <set>

#include "pwb/error.hpp"
#include "pwb/fibration.hpp"

namespace pwb::fib {

namespace {

void collect(const sf::Type& t, int depth, std::vector<std::pair<sf::Type, int>>& out) {
  out.emplace_back(t, depth);
  switch (t->kind) {
    case sf::TypeKind::Arrow:
    case sf::TypeKind::Prod:
      collect(t->a, depth, out);
      collect(t->b, depth, out);
      break;
    case sf::TypeKind::Forall: collect(t->a, depth + 1, out); break;
    default: break;
  }
}

}  // namespace

std::vector<TF> corpus_functors(const std::vector<sf::Type>& types, int max_arity) {
  std::vector<TF> out;
  std::set<std::string> seen;
  auto add = [&](const TF& f) {
    if (f->arity <= max_arity && seen.insert(f->key).second) out.push_back(f);
  };
  for (int n = 0; n <= max_arity; ++n) {
    add(unit_f(n));
    for (int i = 0; i < n; ++i) add(proj(n, i));
  }
  std::vector<std::pair<sf::Type, int>> subs;
  for (const auto& t : types) collect(t, 0, subs);
  for (const auto& [t, d] : subs) {
    if (d > max_arity) continue;
    TF f = from_type(t, d);
    for (; f->arity <= max_arity; f = weaken(f)) add(f);
  }
  return out;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  std::vector<std::vector<TF>> by_arity;

  int pick_arity(int max) { return static_cast<int>(std::uniform_int_distribution<int>(0, max)(rng)); }
  TF functor(int n) {
    const auto& v = by_arity[static_cast<std::size_t>(n)];
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  }
  CtxMor ctx(int n, int m) {
    CtxMor f{n, m, {}};
    for (int i = 0; i < m; ++i) f.comps.push_back(functor(n));
    return f;
  }
};

nlohmann::json ctx_json(const CtxMor& f) {
  nlohmann::json j{{"src", f.src}, {"tgt", f.tgt}, {"comps", nlohmann::json::array()}};
  for (const auto& c : f.comps) j["comps"].push_back(c->key);
  return j;
}

bool same_ctx(const CtxMor& a, const CtxMor& b) {
  if (a.src != b.src || a.tgt != b.tgt) return false;
  for (std::size_t i = 0; i < a.comps.size(); ++i)
    if (!same(a.comps[i], b.comps[i])) return false;
  return true;
}

constexpr int kAttempts = 20;


// Evenly spaced subset of the level-1 environments, always keeping the first and last.
ProbeEnvs thin(ProbeEnvs e, std::size_t max1) {
  if (e.level1.size() <= max1 || max1 < 2) return e;
  std::vector<std::vector<Rel>> kept;
  const std::size_t n = e.level1.size();
  for (std::size_t i = 0; i < max1; ++i) kept.push_back(e.level1[i * (n - 1) / (max1 - 1)]);
  e.level1 = std::move(kept);
  return e;
}

// Records of one trial, committed only when the trial finishes without SizeExceeded.
struct Pending {
  std::vector<std::tuple<Tally*, bool, nlohmann::json>> items;
  void record(Tally& t, bool ok, const std::function<nlohmann::json()>& cx) {
    items.emplace_back(&t, ok, ok ? nlohmann::json() : cx());
  }
  void commit() {
    for (auto& [t, ok, cx] : items) t->record(ok, [&] { return cx; });
  }
};

}  // namespace

Report fibration_suite(const Model& m, const std::vector<TF>& pool, const FibrationOptions& opt) {
  Report r;
  // oversized samples are rejected before they get expensive
  fm::LimitsGuard limits({1024, 1u << 16, 1u << 14});
  const auto& u = m.universe();
  const int A = opt.max_arity;
  Sampler s{std::mt19937_64(opt.seed), std::vector<std::vector<TF>>(static_cast<std::size_t>(A) + 1)};
  for (const auto& f : pool)
    if (f->arity <= A) s.by_arity[static_cast<std::size_t>(f->arity)].push_back(f);
  for (int n = 0; n <= A; ++n)
    if (s.by_arity[static_cast<std::size_t>(n)].empty()) s.by_arity[static_cast<std::size_t>(n)].push_back(unit_f(n));
  std::vector<ProbeEnvs> envs;
  for (int n = 0; n <= A + 1; ++n) envs.push_back(thin(probe_envs(u, n), 24));

  // Runs one random trial; SizeExceeded resamples.
  std::size_t resampled = 0;
  auto trial = [&](const std::function<void(Pending&)>& body) {
    for (int k = 0; k < kAttempts; ++k) {
      Pending p;
      try {
        body(p);
        p.commit();
        return;
      } catch (const SizeExceeded&) {
        ++resampled;
      }
    }
  };

  Tally proj_law{"fib.subst.projection", "subst.projection"}, id_law{"fib.subst.identity", "subst.identity"},
      comp_law{"fib.subst.compose", "subst.compose"}, lazy{"fib.subst.lazy_eager", "subst.lazy"},
      cat_unit{"fib.ctx.unit", "contexts.category"}, cat_assoc{"fib.ctx.assoc", "contexts.category"},
      split_id{"fib.split.identity", "fibration.split"}, split_comp{"fib.split.compose", "fibration.split"},
      generic{"fib.generic_object", "fibration.generic"}, bc1{"fib.bc.terminal", "beck_chevalley"},
      bcx{"fib.bc.product", "beck_chevalley"}, bce{"fib.bc.exponential", "beck_chevalley"},
      bca{"fib.bc.forall", "beck_chevalley"};

  {
  Report::Timer timer(r);
  for (std::size_t t = 0; t < opt.samples; ++t) {
    trial([&](Pending& P) {
      int n = s.pick_arity(A), mm = s.pick_arity(A), k = s.pick_arity(A);
      CtxMor f = s.ctx(n, mm), g = s.ctx(mm, k);
      TF x = s.functor(k);
      // (i) projections
      int i = mm == 0 ? -1 : static_cast<int>(std::uniform_int_distribution<int>(0, mm - 1)(s.rng));
      if (i >= 0) {
        TF lhs = reindex(f, proj(mm, i));
        P.record(proj_law, same(lhs, f.comps[static_cast<std::size_t>(i)]) &&
                            functor_diff(m, reindex_lazy(f, proj(mm, i)), f.comps[static_cast<std::size_t>(i)], envs[static_cast<std::size_t>(n)]).is_null(),
                        [&] { return nlohmann::json{{"f", ctx_json(f)}, {"i", i}}; });
      }
      // (ii) identities
      TF y = s.functor(n);
      P.record(id_law, same(reindex(ctx_id(n), y), eager(y)) &&
                        functor_diff(m, reindex_lazy(ctx_id(n), y), y, envs[static_cast<std::size_t>(n)]).is_null(),
                    [&] { return nlohmann::json{{"x", y->key}}; });
      // (iii) composition, eager and lazy
      TF e1 = reindex(ctx_compose(g, f), x), e2 = reindex(f, reindex(g, x));
      auto d = functor_diff(m, reindex_lazy(ctx_compose(g, f), x), reindex_lazy(f, reindex_lazy(g, x)), envs[static_cast<std::size_t>(n)]);
      P.record(comp_law, same(e1, e2) && d.is_null(),
                      [&] { return nlohmann::json{{"f", ctx_json(f)}, {"g", ctx_json(g)}, {"x", x->key}, {"diff", d}}; });
      auto dl = functor_diff(m, reindex_lazy(g, x), reindex(g, x), envs[static_cast<std::size_t>(mm)]);
      P.record(lazy, dl.is_null(), [&] { return nlohmann::json{{"g", ctx_json(g)}, {"x", x->key}, {"diff", dl}}; });
      // category of contexts
      P.record(cat_unit, same_ctx(ctx_compose(ctx_id(mm), f), f) && same_ctx(ctx_compose(f, ctx_id(n)), ctx_compose(ctx_id(mm), f)),
                      [&] { return nlohmann::json{{"f", ctx_json(f)}}; });
      CtxMor h = s.ctx(k, s.pick_arity(A));
      P.record(cat_assoc, same_ctx(ctx_compose(h, ctx_compose(g, f)), ctx_compose(ctx_compose(h, g), f)),
                       [&] { return nlohmann::json{{"f", ctx_json(f)}, {"g", ctx_json(g)}, {"h", ctx_json(h)}}; });
      // splitness
      P.record(split_id, same(reindex(ctx_id(k), x), eager(x)), [&] { return nlohmann::json{{"x", x->key}}; });
      P.record(split_comp, same(e1, e2) && m.eval0(e1, envs[static_cast<std::size_t>(n)].level0.front()) ==
                                             m.eval0(e2, envs[static_cast<std::size_t>(n)].level0.front()),
                        [&] { return nlohmann::json{{"f", ctx_json(f)}, {"g", ctx_json(g)}, {"x", x->key}}; });
      // generic object
      TF z = s.functor(mm);
      P.record(generic, same_ctx(theta(reindex(f, z)), ctx_compose(theta(z), f)) && same(theta_inv(theta(z)), z),
                     [&] { return nlohmann::json{{"f", ctx_json(f)}, {"x", z->key}}; });
      // Beck-Chevalley maps are identities
      TF a = s.functor(mm), b = s.functor(mm);
      P.record(bc1, same(reindex(f, unit_f(mm)), unit_f(n)), [&] { return nlohmann::json{{"f", ctx_json(f)}}; });
      P.record(bcx, same(reindex(f, prod_f(a, b)), prod_f(reindex(f, a), reindex(f, b))),
                 [&] { return nlohmann::json{{"f", ctx_json(f)}, {"a", a->key}, {"b", b->key}}; });
      P.record(bce, same(reindex(f, arrow_f(a, b)), arrow_f(reindex(f, a), reindex(f, b))),
                 [&] { return nlohmann::json{{"f", ctx_json(f)}, {"a", a->key}, {"b", b->key}}; });
      if (mm + 1 <= A) {
        TF body = s.functor(mm + 1);
        CtxMor ext = ctx_pair(ctx_compose(f, ctx_proj(n)), proj(n + 1, n));
        P.record(bca, same(reindex(f, forall_f(body)), forall_f(reindex(ext, body))),
                   [&] { return nlohmann::json{{"f", ctx_json(f)}, {"body", body->key}}; });
      }
    });
  }
  for (auto* t : {&proj_law, &id_law, &comp_law, &lazy, &cat_unit, &cat_assoc, &split_id, &split_comp, &generic, &bc1,
                  &bcx, &bce, &bca}) {
    t->skipped = resampled;
    t->emit(r);
  }
  }

  // terminal object and products in the category of contexts
  {
    Report::Timer timer(r);
    Tally term{"fib.ctx.terminal", "contexts.terminal"}, prod{"fib.ctx.product", "contexts.product"};
    for (std::size_t t = 0; t < opt.samples / 4 + 1; ++t) {
      int n = s.pick_arity(A), mm = s.pick_arity(A - 1 < 0 ? 0 : A - 1);
      CtxMor f = s.ctx(n, mm);
      term.record(same_ctx(ctx_compose(ctx_bang(mm), f), ctx_bang(n)), [&] { return nlohmann::json{{"f", ctx_json(f)}}; });
      TF x = s.functor(n);
      CtxMor p = ctx_pair(f, x);
      CtxMor hh = s.ctx(n, mm + 1);
      bool ok = same_ctx(ctx_compose(ctx_proj(mm), p), f) && same(reindex(p, proj(mm + 1, mm)), x) &&
                same_ctx(ctx_pair(ctx_compose(ctx_proj(mm), hh), reindex(hh, proj(mm + 1, mm))), hh);
      prod.record(ok, [&] { return nlohmann::json{{"f", ctx_json(f)}, {"x", x->key}, {"h", ctx_json(hh)}}; });
    }
    term.emit(r);
    prod.emit(r);
  }

  // total category and cartesian liftings
  {
    Report::Timer timer(r);
    Tally tunit{"fib.total.unit", "total.category"}, tassoc{"fib.total.assoc", "total.category"},
        cart{"fib.cartesian", "fibration.cartesian"};
    std::size_t skipped = 0;
    for (std::size_t t = 0; t < opt.samples / 4 + 1; ++t) {
      try {
        int n = s.pick_arity(A), mm = s.pick_arity(A), k = s.pick_arity(A);
        CtxMor f = s.ctx(n, mm), g = s.ctx(mm, k);
        TotalObj z{k, s.functor(k)};
        TotalMor lg = cartesian_lift(g, z);
        TotalMor lf = cartesian_lift(f, lg.src);
        const auto& en = envs[static_cast<std::size_t>(n)];
        auto d1 = nat_diff(m, total_compose(total_id(lg.src), lf).fib, lf.fib, en);
        auto d2 = nat_diff(m, total_compose(lf, total_id(lf.src)).fib, lf.fib, en);
        tunit.record(d1.is_null() && d2.is_null(), [&] { return nlohmann::json{{"f", ctx_json(f)}, {"diff", d1.is_null() ? d2 : d1}}; });
        CtxMor h = s.ctx(s.pick_arity(A), n);
        TotalMor lh = cartesian_lift(h, lf.src);
        auto d3 = nat_diff(m, total_compose(lg, total_compose(lf, lh)).fib, total_compose(total_compose(lg, lf), lh).fib,
                           envs[static_cast<std::size_t>(h.src)]);
        tassoc.record(d3.is_null() && same_ctx(total_compose(lg, total_compose(lf, lh)).base,
                                               total_compose(total_compose(lg, lf), lh).base),
                      [&] { return nlohmann::json{{"f", ctx_json(f)}, {"g", ctx_json(g)}, {"h", ctx_json(h)}, {"diff", d3}}; });
        // a morphism (g . f, zeta) into z factors through the lifting of g as (f, zeta)
        TF src = reindex(ctx_compose(g, f), z.x);
        TotalMor direct{{n, src}, z, ctx_compose(g, f), nat::id(src)};
        TotalMor via = total_compose(lg, TotalMor{{n, src}, lg.src, f, nat::id(src)});
        auto d4 = nat_diff(m, via.fib, direct.fib, en);
        cart.record(d4.is_null() && same_ctx(via.base, direct.base),
                    [&] { return nlohmann::json{{"f", ctx_json(f)}, {"g", ctx_json(g)}, {"diff", d4}}; });
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    tunit.skipped = tassoc.skipped = cart.skipped = skipped;
    tunit.emit(r);
    tassoc.emit(r);
    cart.emit(r);
  }

  // fiber cartesian closed structure, checked at every probe environment
  {
    Report::Timer timer(r);
    Tally beta_x{"fib.fiber.product.beta", "fiber.ccc"}, eta_x{"fib.fiber.product.eta", "fiber.ccc"},
        beta_e{"fib.fiber.exponential.beta", "fiber.ccc"}, eta_e{"fib.fiber.exponential.eta", "fiber.ccc"},
        term1{"fib.fiber.terminal", "fiber.ccc"}, pointwise{"fib.fiber.pointwise", "fiber.ccc"};
    std::size_t skipped = 0;
    for (std::size_t t = 0; t < opt.samples / 4 + 1; ++t) {
      try {
        int n = s.pick_arity(A);
        const auto& en = envs[static_cast<std::size_t>(n)];
        TF f = s.functor(n), g = s.functor(n);
        NatRep p = nat::pair(nat::fst(f, g), nat::snd(f, g));
        auto d = nat_diff(m, p, nat::id(prod_f(f, g)), en);
        eta_x.record(d.is_null(), [&] { return nlohmann::json{{"f", f->key}, {"g", g->key}, {"diff", d}}; });
        auto d1 = nat_diff(m, nat::compose(nat::fst(f, g), p), nat::fst(f, g), en);
        auto d2 = nat_diff(m, nat::compose(nat::snd(f, g), p), nat::snd(f, g), en);
        beta_x.record(d1.is_null() && d2.is_null(), [&] { return nlohmann::json{{"f", f->key}, {"g", g->key}}; });
        NatRep ev = nat::eval(f, g);
        TF ar = arrow_f(f, g);
        auto d3 = nat_diff(m, nat::curry(ev, ar, f), nat::id(ar), en);
        eta_e.record(d3.is_null(), [&] { return nlohmann::json{{"f", f->key}, {"g", g->key}, {"diff", d3}}; });
        auto d4 = nat_diff(m, nat::compose(ev, nat::prod_map(nat::curry(ev, ar, f), nat::id(f))), ev, en);
        beta_e.record(d4.is_null(), [&] { return nlohmann::json{{"f", f->key}, {"g", g->key}, {"diff", d4}}; });
        auto d5 = nat_diff(m, nat::terminal(unit_f(n)), nat::id(unit_f(n)), en);
        term1.record(d5.is_null(), [&] { return nlohmann::json{{"n", n}}; });
        // every morphism into a product or an exponential at a probe env, capped
        for (const auto& e : en.level0) {
          FinSet a = m.eval0(f, e), b = m.eval0(g, e);
          auto fs = fm::all_functions(a, b);
          if (fs.size() > 64) fs.resize(64);
          for (const auto& h : fs) {
            FinFn pr = fm::pairing(h, FinFn::identity(a));
            bool ok = fm::compose(fm::fst(b, a), pr) == h && fm::compose(fm::snd(b, a), pr) == FinFn::identity(a);
            FinFn c = fm::curry(fm::compose(h, fm::snd(fm::terminal(), a)), fm::terminal(), a);
            ok = ok && fm::compose(fm::eval(a, b), fm::prod_map(c, FinFn::identity(a))) ==
                           fm::compose(h, fm::snd(fm::terminal(), a));
            pointwise.record(ok, [&] { return nlohmann::json{{"f", f->key}, {"g", g->key}, {"h", fm::to_json(h)}}; });
          }
        }
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    for (auto* t : {&beta_x, &eta_x, &beta_e, &eta_e, &term1, &pointwise}) {
      t->skipped = skipped;
      t->emit(r);
    }
  }

  // epsilon coherence and propositionality at probe environments
  {
    Report::Timer timer(r);
    Tally faces{"fib.eps.faces", "eps.coherence"}, iso{"fib.eps.iso", "eps.coherence"},
        rel{"fib.eps.relevant", "iso.policy"}, prop{"fib.forall.propositional", "forall.level1"},
        face_eq{"fib.faces.stable", "functor.faces"};
    std::size_t skipped = 0;
    for (const auto& f : pool) {
      if (f->arity > A) continue;
      try {
        const auto& en = envs[static_cast<std::size_t>(f->arity)];
        for (const auto& e : en.level0) {
          RelMor eps = m.epsilon(f, e);
          auto cx = [&] { return nlohmann::json{{"functor", f->key}, {"env", e.size()}}; };
          faces.record(eps.has_identity_faces(), cx);
          iso.record(eps.is_iso(), cx);
          rel.record(fm::relevant(u.policy, eps) || u.policy == Policy::Strict, cx);
        }
        for (const auto& e : en.level1) {
          Rel x = m.eval1(f, e);
          face_eq.record(x.dom() == m.eval0(f, dom_env(e)) && x.cod() == m.eval0(f, cod_env(e)),
                         [&] { return nlohmann::json{{"functor", f->key}}; });
          if (has_forall(f)) prop.record(x.is_propositional(), [&] { return nlohmann::json{{"functor", f->key}}; });
        }
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    for (auto* t : {&faces, &iso, &rel, &prop, &face_eq}) {
      t->skipped = skipped;
      t->emit(r);
    }
  }

  // forall adjunction on the counit
  {
    Report::Timer timer(r);
    Tally tri1{"fib.forall.transpose_counit", "forall.adjoint"}, tri2{"fib.forall.counit_transpose", "forall.adjoint"},
        bc{"fib.forall.theta", "beck_chevalley.forall"};
    std::size_t skipped = 0;
    for (const auto& g : pool) {
      if (g->arity < 1 || g->arity > A) continue;
      try {
        int n = g->arity - 1;
        TF all = forall_f(g);
        NatRep eps = nat::counit(g);
        auto d1 = nat_diff(m, nat::transpose(eps, all), nat::id(all), envs[static_cast<std::size_t>(n)]);
        tri1.record(d1.is_null(), [&] { return nlohmann::json{{"functor", g->key}, {"diff", d1}}; });
        NatRep back = nat::compose(eps, reindex(ctx_proj(n), nat::transpose(eps, all)));
        auto d2 = nat_diff(m, back, eps, envs[static_cast<std::size_t>(n + 1)]);
        tri2.record(d2.is_null(), [&] { return nlohmann::json{{"functor", g->key}, {"diff", d2}}; });
        CtxMor f = s.ctx(s.pick_arity(A), n);
        CtxMor ext = ctx_pair(ctx_compose(f, ctx_proj(f.src)), proj(f.src + 1, f.src));
        bc.record(same(reindex(f, all), forall_f(reindex(ext, g))), [&] { return nlohmann::json{{"functor", g->key}}; });
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    for (auto* t : {&tri1, &tri2, &bc}) {
      t->skipped = skipped;
      t->emit(r);
    }
  }
  return r;
}

}  // namespace pwb::fib
