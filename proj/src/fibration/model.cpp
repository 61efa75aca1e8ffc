#include <algorithm>

#include "pwb/error.hpp"
#include "pwb/fibration.hpp"

namespace pwb::fib {

std::vector<FinSet> dom_env(const std::vector<Rel>& env) {
  std::vector<FinSet> out;
  for (const auto& r : env) out.push_back(r.dom());
  return out;
}

std::vector<FinSet> cod_env(const std::vector<Rel>& env) {
  std::vector<FinSet> out;
  for (const auto& r : env) out.push_back(r.cod());
  return out;
}

std::vector<Rel> eq_env(const std::vector<FinSet>& env) {
  std::vector<Rel> out;
  for (const auto& a : env) out.push_back(fm::eq(a));
  return out;
}

namespace {

template <class T>
void check_env(const TF& f, const std::vector<T>& env) {
  if (static_cast<int>(env.size()) != f->arity)
    throw ModelError("environment of length " + std::to_string(env.size()) + " for " + f->key);
}

template <class T>
std::vector<T> extend(std::vector<T> env, T x) {
  env.push_back(std::move(x));
  return env;
}

// Upper bound on relation checks during one family enumeration.
constexpr std::size_t kSearchBudget = 50'000'000;

}  // namespace

std::size_t Model::MemoHash::operator()(const MemoKey& k) const {
  std::size_t h = k.f->hash;
  for (const void* p : k.env) h ^= std::hash<const void*>{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

namespace {

template <class T>
std::vector<const void*> addresses(const std::vector<T>& env) {
  std::vector<const void*> out;
  out.reserve(env.size());
  for (const auto& x : env) out.push_back(x.identity());
  return out;
}

}  // namespace

const Label& Model::family_at(const Label& fam, std::size_t j) {
  if (fam.kind() != LabelKind::Family) throw ModelError("expected a family label, got " + fam.str());
  return fam.child(0).child(j);
}

FinSet Model::eval0(const TF& f, const std::vector<FinSet>& env) const {
  check_env(f, env);
  switch (f->kind) {
    case FKind::Proj: return env[static_cast<std::size_t>(f->index)];
    case FKind::Unit: return fm::terminal();
    default: break;
  }
  MemoKey key{f, addresses(env)};
  {
    std::lock_guard lk(mu_);
    if (auto it = memo0_.find(key); it != memo0_.end()) return it->second.value;
  }
  FinSet out;
  switch (f->kind) {
    case FKind::Prod: out = fm::product(eval0(f->a, env), eval0(f->b, env)); break;
    case FKind::Arrow: out = fm::exponential(eval0(f->a, env), eval0(f->b, env)); break;
    case FKind::Forall: out = forall0(f, env); break;
    case FKind::Subst: {
      std::vector<FinSet> inner;
      for (const auto& x : f->args) inner.push_back(eval0(x, env));
      out = eval0(f->a, inner);
      break;
    }
    default: break;
  }
  std::lock_guard lk(mu_);
  return memo0_.emplace(std::move(key), Entry<FinSet>{env, out}).first->second.value;
}

Rel Model::eval1(const TF& f, const std::vector<Rel>& env) const {
  check_env(f, env);
  switch (f->kind) {
    case FKind::Proj: return env[static_cast<std::size_t>(f->index)];
    case FKind::Unit: return fm::terminal_rel();
    default: break;
  }
  MemoKey key{f, addresses(env)};
  {
    std::lock_guard lk(mu_);
    if (auto it = memo1_.find(key); it != memo1_.end()) return it->second.value;
  }
  Rel out;
  switch (f->kind) {
    case FKind::Prod: out = fm::product(eval1(f->a, env), eval1(f->b, env)); break;
    case FKind::Arrow: out = fm::exponential(eval1(f->a, env), eval1(f->b, env)); break;
    case FKind::Forall: out = forall1(f, env); break;
    case FKind::Subst: {
      std::vector<Rel> inner;
      for (const auto& x : f->args) inner.push_back(eval1(x, env));
      out = eval1(f->a, inner);
      break;
    }
    default: break;
  }
  std::lock_guard lk(mu_);
  return memo1_.emplace(std::move(key), Entry<Rel>{env, out}).first->second.value;
}

std::optional<Label> Model::relates(const TF& f, const std::vector<Rel>& env, const Label& x, const Label& y) const {
  check_env(f, env);
  switch (f->kind) {
    case FKind::Proj: {
      auto ws = env[static_cast<std::size_t>(f->index)].witnesses(x, y);
      if (ws.empty()) return std::nullopt;
      return ws.front();
    }
    case FKind::Unit: return Label::tt();
    case FKind::Prod: {
      auto p = relates(f->a, env, x.child(0), y.child(0));
      if (!p) return std::nullopt;
      auto q = relates(f->b, env, x.child(1), y.child(1));
      if (!q) return std::nullopt;
      return Label::pair(*p, *q);
    }
    case FKind::Arrow: {
      Rel r = eval1(f->a, env);
      std::vector<Label> kv;
      kv.reserve(2 * r.witness_count());
      for (std::size_t k = 0; k < r.witness_count(); ++k) {
        auto w = r.witness_at(k);
        auto v = relates(f->b, env, x.lookup(w.a), y.lookup(w.b));
        if (!v) return std::nullopt;
        kv.push_back(triple(w.a, w.b, w.w));
        kv.push_back(std::move(*v));
      }
      return Label::dep(std::move(kv));
    }
    case FKind::Forall: {
      const auto& u = *u_;
      std::vector<Label> ws;
      ws.reserve(u.objs1.size());
      for (const auto& r : u.objs1) {
        auto d = *u.index0(r.dom()), c = *u.index0(r.cod());
        auto v = relates(f->a, extend(env, r), family_at(x, d), family_at(y, c));
        if (!v) return std::nullopt;
        ws.push_back(std::move(*v));
      }
      return Label::family(Label::tuple(std::move(ws)));
    }
    case FKind::Subst: {
      std::vector<Rel> inner;
      for (const auto& a : f->args) inner.push_back(eval1(a, env));
      return relates(f->a, inner, x, y);
    }
  }
  return std::nullopt;
}

FinSet Model::forall0(const TF& f, const std::vector<FinSet>& env) const {
  const auto& u = *u_;
  const TF& body = f->a;
  const std::size_t P = u.objs0.size();
  if (P == 0) throw ClosureError("quantification over an empty probe universe");

  std::vector<FinSet> cand(P);
  for (std::size_t j = 0; j < P; ++j) cand[j] = eval0(body, extend(env, u.objs0[j]));

  // relation constraints checked once both endpoints are assigned
  std::vector<Rel> eqs = eq_env(env);
  struct Check {
    std::size_t d, c;
    const Rel* r;
  };
  std::vector<std::vector<Check>> checks(P);
  for (const auto& r : u.objs1) {
    std::size_t d = *u.index0(r.dom()), c = *u.index0(r.cod());
    checks[std::max(d, c)].push_back({d, c, &r});
  }
  for (auto& cs : checks)
    std::stable_sort(cs.begin(), cs.end(), [](const Check& a, const Check& b) { return a.r->pair_count() < b.r->pair_count(); });

  struct Transport {
    std::size_t i, j;
    FinFn map;
  };
  std::vector<std::vector<Transport>> transports(P);
  if (!u.isos0().empty()) {
    std::vector<FinFn> ids;
    for (const auto& a : env) ids.push_back(FinFn::identity(a));
    for (const auto& [i, phi] : u.isos0()) {
      std::size_t j = *u.index0(phi.cod());
      transports[std::max(i, j)].push_back({i, j, eval_mor0(body, extend(ids, phi))});
    }
  }

  std::vector<Label> pick(P), out;
  std::size_t budget = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == P) {
      out.push_back(Label::family(Label::tuple(pick)));
      if (out.size() > fm::limits().max_set) throw SizeExceeded("too many families for " + f->key);
      return;
    }
    for (const auto& x : cand[k].elements()) {
      pick[k] = x;
      bool ok = true;
      for (const auto& ch : checks[k]) {
        if (++budget > kSearchBudget) throw SizeExceeded("family search for " + f->key + " exceeds its budget");
        if (!relates(body, extend(eqs, *ch.r), pick[ch.d], pick[ch.c])) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (const auto& t : transports[k])
          if (!(t.map(pick[t.i]) == pick[t.j])) {
            ok = false;
            break;
          }
      if (ok) go(k + 1);
    }
  };
  go(0);
  return FinSet::of(std::move(out));
}

Rel Model::forall1(const TF& f, const std::vector<Rel>& env) const {
  FinSet d = eval0(f, dom_env(env)), c = eval0(f, cod_env(env));
  if (static_cast<double>(d.size()) * static_cast<double>(c.size()) > static_cast<double>(fm::limits().max_pairs))
    throw SizeExceeded("quantified relation over too many pairs");
  std::vector<fm::Witness> ts;
  for (const auto& x : d.elements())
    for (const auto& y : c.elements())
      if (auto w = relates(f, env, x, y)) ts.push_back({x, y, std::move(*w)});
  return Rel::make(std::move(d), std::move(c), std::move(ts));
}

FinFn Model::eval_mor0(const TF& f, const std::vector<FinFn>& isos) const {
  check_env(f, isos);
  if (f->kind != FKind::Proj && std::all_of(isos.begin(), isos.end(), [](const FinFn& i) { return i.is_identity(); })) {
    std::vector<FinSet> env;
    for (const auto& i : isos) env.push_back(i.dom());
    return FinFn::identity(eval0(f, env));
  }
  switch (f->kind) {
    case FKind::Proj: return isos[static_cast<std::size_t>(f->index)];
    case FKind::Unit: return FinFn::identity(fm::terminal());
    case FKind::Prod: return fm::prod_map(eval_mor0(f->a, isos), eval_mor0(f->b, isos));
    case FKind::Arrow: return fm::exp_map(eval_mor0(f->a, isos), eval_mor0(f->b, isos));
    case FKind::Forall: {
      const auto& u = *u_;
      std::vector<FinSet> src, tgt;
      for (const auto& i : isos) {
        src.push_back(i.dom());
        tgt.push_back(i.cod());
      }
      std::vector<FinFn> parts;
      for (const auto& a : u.objs0) parts.push_back(eval_mor0(f->a, extend(isos, FinFn::identity(a))));
      return FinFn::build(eval0(f, src), eval0(f, tgt), [&](const Label& x) {
        std::vector<Label> ys;
        for (std::size_t j = 0; j < parts.size(); ++j) ys.push_back(parts[j](family_at(x, j)));
        return Label::family(Label::tuple(std::move(ys)));
      });
    }
    case FKind::Subst: {
      std::vector<FinFn> inner;
      for (const auto& a : f->args) inner.push_back(eval_mor0(a, isos));
      return eval_mor0(f->a, inner);
    }
  }
  throw ModelError("unknown functor node");
}

RelMor Model::eval_mor1(const TF& f, const std::vector<RelMor>& isos) const {
  check_env(f, isos);
  if (f->kind != FKind::Proj && std::all_of(isos.begin(), isos.end(), [](const RelMor& i) { return i.is_identity(); })) {
    std::vector<Rel> env;
    for (const auto& i : isos) env.push_back(i.src());
    return RelMor::identity(eval1(f, env));
  }
  switch (f->kind) {
    case FKind::Proj: return isos[static_cast<std::size_t>(f->index)];
    case FKind::Unit: return RelMor::identity(fm::terminal_rel());
    case FKind::Prod: return fm::prod_map(eval_mor1(f->a, isos), eval_mor1(f->b, isos));
    case FKind::Arrow: return fm::exp_map(eval_mor1(f->a, isos), eval_mor1(f->b, isos));
    case FKind::Forall: {
      const auto& u = *u_;
      std::vector<Rel> src, tgt;
      std::vector<FinFn> fs, gs;
      for (const auto& m : isos) {
        src.push_back(m.src());
        tgt.push_back(m.tgt());
        fs.push_back(m.f());
        gs.push_back(m.g());
      }
      std::vector<RelMor> parts;
      for (const auto& r : u.objs1) parts.push_back(eval_mor1(f->a, extend(isos, RelMor::identity(r))));
      return RelMor::build(eval1(f, src), eval1(f, tgt), eval_mor0(f, fs), eval_mor0(f, gs), [&](const fm::Witness& x) {
        std::vector<Label> ws;
        for (std::size_t j = 0; j < parts.size(); ++j) {
          const Rel& r = u.objs1[j];
          ws.push_back(parts[j].act(family_at(x.a, *u.index0(r.dom())), family_at(x.b, *u.index0(r.cod())),
                                    family_at(x.w, j)));
        }
        return Label::family(Label::tuple(std::move(ws)));
      });
    }
    case FKind::Subst: {
      std::vector<RelMor> inner;
      for (const auto& a : f->args) inner.push_back(eval_mor1(a, isos));
      return eval_mor1(f->a, inner);
    }
  }
  throw ModelError("unknown functor node");
}

RelMor Model::epsilon(const TF& f, const std::vector<FinSet>& env) const {
  check_env(f, env);
  if (f->kind == FKind::Proj || f->kind == FKind::Unit) return epsilon_uncached(f, env);
  MemoKey key{f, addresses(env)};
  {
    std::lock_guard lk(mu_);
    if (auto it = memo_eps_.find(key); it != memo_eps_.end()) return it->second.value;
  }
  RelMor out = epsilon_uncached(f, env);
  std::lock_guard lk(mu_);
  return memo_eps_.emplace(std::move(key), EpsEntry{env, out}).first->second.value;
}

RelMor Model::epsilon_uncached(const TF& f, const std::vector<FinSet>& env) const {
  switch (f->kind) {
    case FKind::Proj: return RelMor::identity(fm::eq(env[static_cast<std::size_t>(f->index)]));
    case FKind::Unit: return fm::eta_unit();
    case FKind::Prod:
      return fm::compose(fm::prod_map(epsilon(f->a, env), epsilon(f->b, env)),
                         fm::eta_prod(eval0(f->a, env), eval0(f->b, env)));
    case FKind::Arrow:
      return fm::compose(fm::exp_map(epsilon(f->a, env), epsilon(f->b, env)),
                         fm::eta_exp(eval0(f->a, env), eval0(f->b, env)));
    case FKind::Forall: {
      FinSet a = eval0(f, env);
      std::vector<Rel> eqs = eq_env(env);
      FinFn id = FinFn::identity(a);
      return RelMor::build(fm::eq(a), eval1(f, eqs), id, id, [&](const fm::Witness& x) {
        auto w = relates(f, eqs, x.a, x.a);
        if (!w) throw ModelError("family " + x.a.str() + " is not related to itself at the equality environment");
        return *w;
      });
    }
    case FKind::Subst: {
      std::vector<FinSet> inner;
      std::vector<RelMor> eps;
      for (const auto& a : f->args) {
        inner.push_back(eval0(a, env));
        eps.push_back(epsilon(a, env));
      }
      return fm::compose(eval_mor1(f->a, eps), epsilon(f->a, inner));
    }
  }
  throw ModelError("unknown functor node");
}

}  // namespace pwb::fib
