#include "pwb/interp.hpp"

#include <set>
#include <sstream>

#include "pwb/error.hpp"

namespace pwb::interp {

namespace nat = fib::nat;

TF interp_type(int depth, const sf::Type& t) {
  if (!sf::well_formed(t, depth)) throw ModelError("type " + sf::pretty(t) + " is not well scoped at depth " + std::to_string(depth));
  return fib::from_type(t, depth);
}

namespace {

TF context_prefix(const sf::Context& ctx, std::size_t len) {
  TF c = fib::unit_f(ctx.type_depth);
  for (std::size_t i = 0; i < len; ++i) c = fib::prod_f(interp_type(ctx.type_depth, ctx.vars[i]), c);
  return c;
}

NatRep variable(const sf::Context& ctx, int i) {
  std::size_t k = ctx.vars.size();
  if (i < 0 || static_cast<std::size_t>(i) >= k) throw ModelError("unbound term variable " + std::to_string(i));
  NatRep acc = nat::id(context_prefix(ctx, k));
  for (int j = 0; j < i; ++j) {
    std::size_t len = k - j;
    acc = nat::compose(nat::snd(interp_type(ctx.type_depth, ctx.vars[len - 1]), context_prefix(ctx, len - 1)), acc);
  }
  std::size_t len = k - i;
  return nat::compose(nat::fst(interp_type(ctx.type_depth, ctx.vars[len - 1]), context_prefix(ctx, len - 1)), acc);
}

sf::Context push_type(const sf::Context& ctx) {
  sf::Context out{ctx.type_depth + 1, {}};
  for (const auto& v : ctx.vars) out.vars.push_back(sf::shift_type(v, 1));
  return out;
}

NatRep go(const sf::Term& t, const sf::Context& ctx) {
  const int n = ctx.type_depth;
  switch (t->kind) {
    case sf::TermKind::Var: return variable(ctx, t->index);
    case sf::TermKind::Unit: return nat::terminal(context_functor(ctx));
    case sf::TermKind::Lam: {
      TF c = context_functor(ctx);
      TF s = interp_type(n, t->ty);
      sf::Context inner = ctx;
      inner.vars.push_back(t->ty);
      NatRep body = go(t->a, inner);  // S x C -> T
      NatRep swap = nat::pair(nat::snd(c, s), nat::fst(c, s));
      return nat::curry(nat::compose(body, swap), c, s);
    }
    case sf::TermKind::App: {
      NatRep f = go(t->a, ctx), a = go(t->b, ctx);
      if (f.tgt->kind != fib::FKind::Arrow) throw ModelError("application of a non-function");
      return nat::compose(nat::eval(f.tgt->a, f.tgt->b), nat::pair(f, a));
    }
    case sf::TermKind::Pair: return nat::pair(go(t->a, ctx), go(t->b, ctx));
    case sf::TermKind::Fst:
    case sf::TermKind::Snd: {
      NatRep p = go(t->a, ctx);
      if (p.tgt->kind != fib::FKind::Prod) throw ModelError("projection out of a non-product");
      return nat::compose(t->kind == sf::TermKind::Fst ? nat::fst(p.tgt->a, p.tgt->b) : nat::snd(p.tgt->a, p.tgt->b), p);
    }
    case sf::TermKind::TyLam: return nat::transpose(go(t->a, push_type(ctx)), context_functor(ctx));
    case sf::TermKind::TyApp: {
      NatRep inner = go(t->a, ctx);
      if (inner.tgt->kind != fib::FKind::Forall) throw ModelError("type application of a non-polymorphic term");
      TF body = inner.tgt->a;
      fib::CtxMor s = fib::ctx_pair(fib::ctx_id(n), interp_type(n, t->ty));
      NatRep ev = fib::reindex(s, nat::counit(body));
      ev.name = "inst[" + sf::pretty(t->ty) + "]";
      return nat::compose(ev, inner);
    }
  }
  throw ModelError("unknown term");
}

}  // namespace

TF context_functor(const sf::Context& ctx) { return context_prefix(ctx, ctx.vars.size()); }

NatRep interp_term(const sf::Term& t, const sf::Context& ctx) {
  sf::type_of(t, ctx);
  return go(t, ctx);
}

std::pair<sf::Term, int> open_term(const sf::Term& t, const sf::Type& ty) {
  int k = 0;
  for (sf::Type cur = ty; cur->kind == sf::TypeKind::Forall; cur = cur->a) ++k;
  sf::Term s = t;
  for (int i = 0; i < k; ++i) s = sf::tyapp(s, sf::tvar(k - 1 - i));
  return {s, k};
}

Label element(const fib::Model& m, const NatRep& n, const std::vector<FinSet>& env) {
  FinFn f = n.at0(m, env);
  if (f.dom().size() != 1) throw ModelError("element of a transformation out of a non-singleton");
  return f(f.dom().at(0));
}

// ---- identity extension

EpsTable eps_table(const RelMor& eps) {
  EpsTable t{eps.src().dom(), eps.tgt(), {}};
  for (std::size_t k = 0; k < eps.src().witness_count(); ++k) t.images.push_back(eps.apply(eps.src().witness_at(k)));
  return t;
}

nlohmann::json eps_violation(const EpsTable& t) {
  if (!(t.target.dom() == t.obj) || !(t.target.cod() == t.obj))
    return {{"law", "endpoints"}, {"object", t.obj.str()}, {"target", t.target.str()}};
  if (t.images.size() != t.obj.size())
    return {{"law", "size"}, {"object", t.obj.str()}, {"images", t.images.size()}};
  std::set<std::size_t> hit;
  for (std::size_t i = 0; i < t.images.size(); ++i) {
    const auto& x = t.obj.at(i);
    const auto& img = t.images[i];
    auto cx = [&](const char* law) {
      return nlohmann::json{{"law", law}, {"element", x.str()},
                            {"image", {img.a.str(), img.b.str(), img.w.str()}}};
    };
    if (!(img.a == x) || !(img.b == x)) return cx("element map");
    auto ia = t.obj.index_of(img.a), ib = t.obj.index_of(img.b);
    auto flat = t.target.flat_index(static_cast<std::uint32_t>(*ia), static_cast<std::uint32_t>(*ib), img.w);
    if (!flat) return cx("witness");
    if (!hit.insert(*flat).second) return cx("injective");
  }
  if (hit.size() != t.target.witness_count())
    return {{"law", "surjective"}, {"object", t.obj.str()}, {"target", t.target.str()}};
  return nullptr;
}

namespace {

template <class T>
std::vector<T> spread(const std::vector<T>& xs, std::size_t cap) {
  if (xs.size() <= cap) return xs;
  std::vector<T> out;
  for (std::size_t i = 0; i < cap; ++i) out.push_back(xs[i * xs.size() / cap]);
  return out;
}

// Probe envs of arity n, at most `cap` per level, spread evenly over all of them.
fib::ProbeEnvs sample_envs(const fib::ProbeUniverse& u, int n, std::size_t cap) {
  auto all = fib::probe_envs(u, n, 1u << 14);
  return {spread(all.level0, cap), spread(all.level1, cap)};
}

nlohmann::json env_json(const std::vector<FinSet>& e) {
  auto j = nlohmann::json::array();
  for (const auto& a : e) j.push_back(a.str());
  return j;
}

}  // namespace

Report iel_check(const fib::Model& m, const sf::Type& t, int depth) {
  Report r;
  const std::string law = "interp.iel", anchor = "identity_extension";
  std::string name = sf::pretty(t);
  try {
    TF f = interp_type(depth, t);
    std::ostringstream sizes;
    std::size_t count = 0;
    for (const auto& env : sample_envs(m.universe(), depth, 64).level0) {
      RelMor eps = m.epsilon(f, env);
      FinSet a = m.eval0(f, env);
      Rel target = m.eval1(f, fib::eq_env(env));
      nlohmann::json cx;
      if (!(eps.src() == fm::eq(a)) || !(eps.tgt() == target))
        cx = {{"law", "endpoints"}};
      else
        cx = eps_violation(eps_table(eps));
      if (!cx.is_null()) {
        cx["type"] = name;
        cx["env"] = env_json(env);
        r.fail(law, anchor, cx, name);
        return r;
      }
      if (count++ < 8) sizes << (count > 1 ? "; " : "") << "|T0|=" << a.size() << " witnesses=" << target.witness_count();
    }
    r.pass(law, anchor, name + " at " + std::to_string(count) + " envs: " + sizes.str());
  } catch (const ClosureError& e) {
    r.skip(law, anchor, name + ": " + e.what());
  } catch (const SizeExceeded& e) {
    r.skip(law, anchor, name + ": " + e.what());
  }
  return r;
}

// ---- abstraction

fib::ProbeUniverse extend_universe(const fib::ProbeUniverse& u, const std::vector<Rel>& rels) {
  fib::ProbeUniverse out = u;
  for (const auto& r : rels) out.objs1.push_back(r);
  out.finish();
  return out;
}

Report abstraction_check(const fib::Model& m, const sf::Term& t, const sf::Type& ty, const std::vector<Rel>& focus,
                         std::size_t cap) {
  Report r;
  const std::string law = "interp.abstraction", anchor = "abstraction";
  try {
    auto [open, k] = open_term(t, ty);
    NatRep n = interp_term(open, {k, {}});
    auto envs = sample_envs(m.universe(), k, cap);
    if (!focus.empty()) {
      std::vector<Rel> cur;
      std::function<void()> add = [&] {
        if (static_cast<int>(cur.size()) == k) {
          envs.level1.push_back(cur);
          envs.level0.push_back(fib::dom_env(cur));
          envs.level0.push_back(fib::cod_env(cur));
          return;
        }
        for (const auto& x : focus) {
          cur.push_back(x);
          add();
          cur.pop_back();
        }
      };
      add();
    }
    auto cx = fib::nat_violation(m, n, envs);
    std::string detail = std::to_string(envs.level1.size()) + " relation envs, " + std::to_string(envs.level0.size()) +
                         " object envs";
    r.check(cx.is_null(), law, anchor, cx, detail);
  } catch (const ClosureError& e) {
    r.skip(law, anchor, e.what());
  } catch (const SizeExceeded& e) {
    r.skip(law, anchor, e.what());
  }
  return r;
}

// ---- corpus checks

namespace {

struct Site {
  sf::Context ctx;
  sf::Term t;
};

void sites(const sf::Term& t, const sf::Context& ctx, std::vector<Site>& out) {
  out.push_back({ctx, t});
  switch (t->kind) {
    case sf::TermKind::Lam: {
      sf::Context inner = ctx;
      inner.vars.push_back(t->ty);
      sites(t->a, inner, out);
      return;
    }
    case sf::TermKind::TyLam: sites(t->a, push_type(ctx), out); return;
    default:
      if (t->a) sites(t->a, ctx, out);
      if (t->b) sites(t->b, ctx, out);
  }
}

}  // namespace

Report interp_suite(const fib::Model& m, const std::vector<sf::Definition>& prog, const InterpOptions& opt) {
  Report r;
  const auto& u = m.universe();
  auto envs_at = [&](int n) { return sample_envs(u, n, opt.env_cap); };
  for (const auto& d : prog) {
    auto guarded = [&](const std::string& law, const std::string& anchor, const std::function<nlohmann::json()>& f) {
      try {
        auto cx = f();
        if (!cx.is_null()) cx["definition"] = d.name;
        r.check(cx.is_null(), law, anchor, cx, d.name);
      } catch (const ClosureError& e) {
        r.skip(law, anchor, d.name + ": " + e.what());
      } catch (const SizeExceeded& e) {
        r.skip(law, anchor, d.name + ": " + e.what());
      } catch (const FuelExhausted& e) {
        r.skip(law, anchor, d.name + ": " + e.what());
      }
    };
    sf::Type ty;
    try {
      ty = sf::type_of(d.term);
    } catch (const sf::TypeError& e) {
      r.skip("interp.validate", "seely", d.name + ": " + e.what());
      continue;
    }
    auto [open, k] = open_term(d.term, ty);

    guarded("interp.validate", "seely", [&]() -> nlohmann::json {
      auto cx = fib::nat_violation(m, interp_term(d.term), envs_at(0));
      if (cx.is_null()) cx = fib::nat_violation(m, interp_term(open, {k, {}}), envs_at(k));
      return cx;
    });
    guarded("interp.soundness", "seely", [&]() -> nlohmann::json {
      auto cx = fib::nat_diff(m, interp_term(sf::normalize(d.term)), interp_term(d.term), envs_at(0));
      if (cx.is_null())
        cx = fib::nat_diff(m, interp_term(sf::normalize(open), {k, {}}), interp_term(open, {k, {}}), envs_at(k));
      return cx;
    });

    std::vector<Site> all;
    sites(d.term, {}, all);
    guarded("interp.substitution", "substitution", [&]() -> nlohmann::json {
      for (const auto& s : all) {
        if (s.t->kind != sf::TermKind::TyApp) continue;
        sf::Type f = sf::type_of(s.t->a, s.ctx);
        int n = s.ctx.type_depth;
        TF lhs = interp_type(n, sf::subst_type(f->a, s.t->ty));
        TF rhs = fib::reindex(fib::ctx_pair(fib::ctx_id(n), interp_type(n, s.t->ty)), interp_type(n + 1, f->a));
        auto cx = fib::functor_diff(m, lhs, rhs, envs_at(n));
        if (!cx.is_null()) {
          cx["application"] = sf::pretty(s.t);
          return cx;
        }
      }
      return nullptr;
    });
    guarded("interp.forall.roundtrip", "forall_adjoint", [&]() -> nlohmann::json {
      for (const auto& s : all) {
        if (s.t->kind != sf::TermKind::TyLam) continue;
        int n = s.ctx.type_depth;
        TF c = context_functor(s.ctx);
        NatRep body = interp_term(s.t->a, push_type(s.ctx));
        NatRep tr = nat::transpose(body, c);
        NatRep back = nat::compose(nat::counit(body.tgt), fib::reindex(fib::ctx_proj(n), tr));
        auto cx = fib::nat_diff(m, back, body, envs_at(n + 1));
        if (cx.is_null()) {
          TF all_f = fib::forall_f(body.tgt);
          cx = fib::nat_diff(m, nat::transpose(nat::counit(body.tgt), all_f), nat::id(all_f), envs_at(n));
        }
        if (!cx.is_null()) {
          cx["abstraction"] = sf::pretty(s.t);
          return cx;
        }
      }
      return nullptr;
    });

    r.append(iel_check(m, ty, 0));
    if (k > 0) r.append(iel_check(m, sf::type_of(open, {k, {}}), k));
    Report ab = abstraction_check(m, d.term, ty, {}, opt.env_cap);
    for (auto rec : ab.records()) {
      rec.detail = d.name + ": " + rec.detail;
      r.add(rec);
    }
  }
  return r;
}

}  // namespace pwb::interp
