#include <algorithm>
#include <set>

#include "pwb/error.hpp"
#include "pwb/fibration.hpp"

namespace pwb::fib {

// ---- context morphisms

CtxMor ctx_id(int n) {
  CtxMor f{n, n, {}};
  for (int i = 0; i < n; ++i) f.comps.push_back(proj(n, i));
  return f;
}

CtxMor ctx_compose(const CtxMor& g, const CtxMor& f) {
  if (f.tgt != g.src) throw ModelError("composition of context morphisms with mismatched boundaries");
  CtxMor h{f.src, g.tgt, {}};
  for (const auto& c : g.comps) h.comps.push_back(substitute(c, f.comps, f.src));
  return h;
}

CtxMor ctx_proj(int n) {
  CtxMor f{n + 1, n, {}};
  for (int i = 0; i < n; ++i) f.comps.push_back(proj(n + 1, i));
  return f;
}

CtxMor ctx_bang(int n) { return {n, 0, {}}; }

CtxMor ctx_pair(const CtxMor& f, const TF& x) {
  if (x->arity != f.src) throw ModelError("context extension with a functor of the wrong arity");
  CtxMor g = f;
  g.tgt += 1;
  g.comps.push_back(x);
  return g;
}

TF reindex(const CtxMor& f, const TF& x) {
  if (x->arity != f.tgt) throw ModelError("reindexing " + x->key + " along a morphism into " + std::to_string(f.tgt));
  return substitute(x, f.comps, f.src);
}

TF reindex_lazy(const CtxMor& f, const TF& x) { return subst_f(x, f.comps, f.src); }

NatRep reindex(const CtxMor& f, const NatRep& a) {
  auto comps = f.comps;
  auto at0 = [a, comps](const Model& m, const std::vector<FinSet>& e) {
    std::vector<FinSet> inner;
    for (const auto& c : comps) inner.push_back(m.eval0(c, e));
    return a.at0(m, inner);
  };
  auto at1 = [a, comps](const Model& m, const std::vector<Rel>& e) {
    std::vector<Rel> inner;
    for (const auto& c : comps) inner.push_back(m.eval1(c, e));
    return a.at1(m, inner);
  };
  return {reindex(f, a.src), reindex(f, a.tgt), at0, at1, "reindex(" + a.name + ")"};
}

CtxMor theta(const TF& x) { return {x->arity, 1, {x}}; }

TF theta_inv(const CtxMor& f) {
  if (f.tgt != 1) throw ModelError("generic object correspondence needs a morphism into 1");
  return f.comps[0];
}

// ---- total category

TotalMor total_id(const TotalObj& o) { return {o, o, ctx_id(o.n), nat::id(o.x)}; }

TotalMor total_compose(const TotalMor& g, const TotalMor& f) {
  if (f.tgt.n != g.src.n || !same(f.tgt.x, g.src.x)) throw ModelError("composition of total morphisms with mismatched ends");
  return {f.src, g.tgt, ctx_compose(g.base, f.base), nat::compose(reindex(f.base, g.fib), f.fib)};
}

TotalMor cartesian_lift(const CtxMor& f, const TotalObj& y) {
  if (y.n != f.tgt) throw ModelError("lifting needs an object over the target");
  TF x = reindex(f, y.x);
  return {{f.src, x}, y, f, nat::id(x)};
}

// ---- probe environments

ProbeEnvs probe_envs(const ProbeUniverse& u, int n, std::size_t cap) {
  ProbeEnvs out;
  auto tuples = [&](auto& dst, const auto& pool) {
    using V = typename std::decay_t<decltype(pool)>::value_type;
    std::vector<V> cur;
    std::function<void()> go = [&] {
      if (dst.size() >= cap) return;
      if (static_cast<int>(cur.size()) == n) {
        dst.push_back(cur);
        return;
      }
      for (const auto& x : pool) {
        cur.push_back(x);
        go();
        cur.pop_back();
      }
    };
    go();
  };
  tuples(out.level0, u.objs0);
  tuples(out.level1, u.objs1);
  return out;
}

namespace {

nlohmann::json env_json(const std::vector<FinSet>& e) {
  auto j = nlohmann::json::array();
  for (const auto& a : e) j.push_back(a.str());
  return j;
}

nlohmann::json env_json(const std::vector<Rel>& e) {
  auto j = nlohmann::json::array();
  for (const auto& r : e) j.push_back(r.str());
  return j;
}

}  // namespace

nlohmann::json functor_diff(const Model& m, const TF& f, const TF& g, const ProbeEnvs& envs) {
  for (const auto& e : envs.level0) {
    if (!(m.eval0(f, e) == m.eval0(g, e)))
      return {{"level", 0}, {"env", env_json(e)}, {"lhs", f->key}, {"rhs", g->key}};
    if (!(m.epsilon(f, e) == m.epsilon(g, e)))
      return {{"level", "epsilon"}, {"env", env_json(e)}, {"lhs", f->key}, {"rhs", g->key}};
  }
  for (const auto& e : envs.level1)
    if (!(m.eval1(f, e) == m.eval1(g, e))) return {{"level", 1}, {"env", env_json(e)}, {"lhs", f->key}, {"rhs", g->key}};
  return nullptr;
}

nlohmann::json nat_diff(const Model& m, const NatRep& a, const NatRep& b, const ProbeEnvs& envs) {
  for (const auto& e : envs.level0)
    if (!(a.at0(m, e) == b.at0(m, e))) return {{"level", 0}, {"env", env_json(e)}, {"lhs", a.name}, {"rhs", b.name}};
  for (const auto& e : envs.level1)
    if (!(a.at1(m, e) == b.at1(m, e))) return {{"level", 1}, {"env", env_json(e)}, {"lhs", a.name}, {"rhs", b.name}};
  return nullptr;
}

nlohmann::json nat_violation(const Model& m, const NatRep& a, const ProbeEnvs& envs) {
  for (const auto& e : envs.level1) {
    RelMor t;
    try {
      t = a.at1(m, e);
    } catch (const ModelError& ex) {
      return {{"law", "relation"}, {"env", env_json(e)}, {"nat", a.name}, {"error", ex.what()}};
    }
    if (!(t.f() == a.at0(m, dom_env(e))) || !(t.g() == a.at0(m, cod_env(e))))
      return {{"law", "faces"}, {"env", env_json(e)}, {"nat", a.name}};
  }
  const auto& u = m.universe();
  for (const auto& e : envs.level0) {
    FinFn t0 = a.at0(m, e);
    RelMor lhs = fm::compose(a.at1(m, eq_env(e)), m.epsilon(a.src, e));
    RelMor rhs = fm::compose(m.epsilon(a.tgt, e), fm::eq(t0));
    if (!(lhs == rhs)) return {{"law", "degeneracy"}, {"env", env_json(e)}, {"nat", a.name}};
    // naturality along relevant isomorphisms in one position
    for (std::size_t k = 0; k < e.size(); ++k)
      for (const auto& [i, phi] : u.isos0()) {
        if (!(u.objs0[i] == e[k])) continue;
        std::vector<FinFn> isos;
        std::vector<FinSet> e2 = e;
        for (const auto& x : e) isos.push_back(FinFn::identity(x));
        isos[k] = phi;
        e2[k] = phi.cod();
        if (!(fm::compose(m.eval_mor0(a.tgt, isos), t0) == fm::compose(a.at0(m, e2), m.eval_mor0(a.src, isos))))
          return {{"law", "naturality"}, {"env", env_json(e)}, {"nat", a.name}, {"position", k}};
      }
  }
  return nullptr;
}

// ---- universe closure

namespace {

void type_args(const sf::Term& t, int depth, std::vector<std::pair<sf::Type, int>>& out) {
  if (!t) return;
  switch (t->kind) {
    case sf::TermKind::TyLam: type_args(t->a, depth + 1, out); return;
    case sf::TermKind::TyApp:
      out.emplace_back(t->ty, depth);
      type_args(t->a, depth, out);
      return;
    default:
      type_args(t->a, depth, out);
      type_args(t->b, depth, out);
  }
}

constexpr std::size_t kMaxCarrier = 256;
constexpr int kMaxIterations = 8;

}  // namespace

ClosureResult universe_closure(const std::vector<sf::Definition>& prog, const ProbeUniverse& seed, std::size_t bound) {
  std::vector<std::pair<sf::Type, int>> args;
  for (const auto& d : prog) type_args(d.term, 0, args);
  std::vector<TF> fs;
  std::set<std::string> seen;
  for (const auto& [ty, depth] : args) {
    TF f = from_type(ty, depth);
    if (f->kind == FKind::Proj) continue;  // always a probe
    if (seen.insert(f->key).second) fs.push_back(f);
  }

  ClosureResult res;
  res.universe = seed;
  res.universe.finish();
  if (fs.empty()) {
    res.closed = true;
    return res;
  }
  for (int it = 1; it <= kMaxIterations; ++it) {
    res.iterations = it;
    auto u = std::make_shared<const ProbeUniverse>(res.universe);
    Model m(u);
    ProbeUniverse next = *u;
    try {
      for (const auto& f : fs) {
        auto envs = probe_envs(*u, f->arity, 4096);
        for (const auto& e : envs.level0) {
          FinSet a = m.eval0(f, e);
          if (a.size() > kMaxCarrier) {
            res.reason = "type argument " + f->key + " has " + std::to_string(a.size()) + " elements";
            return res;
          }
          next.objs0.push_back(a);
        }
        for (const auto& e : envs.level1) next.objs1.push_back(m.eval1(f, e));
      }
    } catch (const SizeExceeded& ex) {
      res.reason = ex.what();
      return res;
    }
    next.finish();
    if (next.objs0.size() > bound) {
      res.reason = "closure needs more than " + std::to_string(bound) + " objects";
      return res;
    }
    if (next.objs0 == u->objs0 && next.objs1 == u->objs1) {
      res.closed = true;
      return res;
    }
    res.universe = std::move(next);
  }
  res.reason = "no fixpoint after " + std::to_string(kMaxIterations) + " iterations";
  return res;
}

}  // namespace pwb::fib
