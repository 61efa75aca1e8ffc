#include "pwb/cube.hpp"

#include <algorithm>
#include <random>

#include "pwb/error.hpp"

namespace pwb::cube {

const char* to_string(Degen d) {
  switch (d) {
    case Degen::EqH: return "eq_h";
    case Degen::EqV: return "eq_v";
    case Degen::ConnTop: return "conn_top";
    case Degen::ConnBot: return "conn_bot";
  }
  return "?";
}

const Shape& shape(Degen d) {
  using E = EdgeRole;
  static const Shape h{{0, 1, 0, 1}, {E::Rel, E::EqDom, E::Rel, E::EqCod}};
  static const Shape v{{0, 0, 1, 1}, {E::EqDom, E::Rel, E::EqCod, E::Rel}};
  static const Shape t{{0, 1, 1, 1}, {E::Rel, E::Rel, E::EqCod, E::EqCod}};
  static const Shape b{{0, 0, 0, 1}, {E::EqDom, E::EqDom, E::Rel, E::Rel}};
  switch (d) {
    case Degen::EqH: return h;
    case Degen::EqV: return v;
    case Degen::ConnTop: return t;
    case Degen::ConnBot: return b;
  }
  return h;
}

TwoRel degen(Degen d, const Rel& r) {
  switch (d) {
    case Degen::EqH: return eq_h(r);
    case Degen::EqV: return eq_v(r);
    case Degen::ConnTop: return conn_top(r);
    case Degen::ConnBot: return conn_bot(r);
  }
  throw ModelError("unknown degeneracy");
}

TwoRelMor degen(Degen d, const RelMor& m) {
  switch (d) {
    case Degen::EqH: return eq_h(m);
    case Degen::EqV: return eq_v(m);
    case Degen::ConnTop: return conn_top(m);
    case Degen::ConnBot: return conn_bot(m);
  }
  throw ModelError("unknown degeneracy");
}

std::vector<TwoRel> degen_env(Degen d, const std::vector<Rel>& env) {
  std::vector<TwoRel> out;
  for (const auto& r : env) out.push_back(degen(d, r));
  return out;
}

std::vector<Rel> witrels(int bound, int max_mult) {
  std::vector<Rel> out;
  for (int i = 1; i <= bound; ++i)
    for (int j = 1; j <= bound; ++j) {
      FinSet a = FinSet::atoms(i), b = FinSet::atoms(j);
      const std::size_t cells = static_cast<std::size_t>(i * j);
      std::vector<int> mult(cells, 0);
      for (;;) {
        std::vector<fm::Witness> ts;
        for (std::size_t k = 0; k < cells; ++k)
          for (int w = 0; w < mult[k]; ++w)
            ts.push_back({a.at(k / static_cast<std::size_t>(j)), b.at(k % static_cast<std::size_t>(j)),
                          Label::sym("w" + std::to_string(w))});
        out.push_back(Rel::make(a, b, std::move(ts)));
        std::size_t k = 0;
        while (k < cells && ++mult[k] > max_mult) mult[k++] = 0;
        if (k == cells) break;
      }
    }
  return out;
}

std::vector<TwoRel> probe_squares(const fib::ProbeUniverse& u) {
  std::vector<TwoRel> out;
  for (const auto& r : u.objs1)
    for (auto d : kDegens) {
      TwoRel q = degen(d, r);
      if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
    }
  for (const auto& q : u.objs2)
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  return out;
}

TwoRel eval2(const TF& f, const std::vector<TwoRel>& env) {
  if (env.size() != static_cast<std::size_t>(f->arity))
    throw ModelError("environment of length " + std::to_string(env.size()) + " for a functor of arity " +
                     std::to_string(f->arity));
  switch (f->kind) {
    case fib::FKind::Proj: return env[static_cast<std::size_t>(f->index)];
    case fib::FKind::Unit: return terminal2();
    case fib::FKind::Prod: return product(eval2(f->a, env), eval2(f->b, env));
    case fib::FKind::Arrow: return exponential(eval2(f->a, env), eval2(f->b, env));
    case fib::FKind::Subst: {
      std::vector<TwoRel> inner;
      for (const auto& x : f->args) inner.push_back(eval2(x, env));
      return eval2(f->a, inner);
    }
    case fib::FKind::Forall: break;
  }
  throw ModelError("level-2 evaluation of a quantified functor: " + f->key);
}

TwoRelMor inverse(const TwoRelMor& m) {
  std::array<RelMor, 4> e;
  for (int i = 0; i < 4; ++i) e[i] = m.edge(static_cast<Face2>(i)).inverse();
  return TwoRelMor::make(m.tgt(), m.src(), e);
}

std::optional<TwoRelMor> epsilon2(const fib::Model& m, const TF& f, Degen d, const std::vector<Rel>& env) {
  Rel v = m.eval1(f, env);
  TwoRel src = degen(d, v), tgt = eval2(f, degen_env(d, env));
  std::array<RelMor, 4> e;
  for (int i = 0; i < 4; ++i) {
    switch (shape(d).edge[i]) {
      case EdgeRole::Rel: e[i] = RelMor::identity(v); break;
      case EdgeRole::EqDom: e[i] = m.epsilon(f, fib::dom_env(env)); break;
      case EdgeRole::EqCod: e[i] = m.epsilon(f, fib::cod_env(env)); break;
    }
  }
  try {
    return try_make(src, tgt, e);
  } catch (const ModelError&) {
    return std::nullopt;
  }
}

Eta2Result eta2_extension(const Eta2Input& in, bool exhaustive, std::size_t cap) {
  Eta2Result r;
  TwoRelMor rhs;
  try {
    rhs = compose(in.eps_tgt, degen(Degen::EqH, in.eta1));
    r.eta2 = compose(rhs, inverse(in.eps_src));
  } catch (const ModelError& e) {
    r.problem = {{"reason", "equation unsolvable"}, {"error", e.what()}};
    return r;
  }
  const auto& x = *r.eta2;
  r.faces_ok = x.edge(Face2::ZeroTop) == in.eta1 && x.edge(Face2::ZeroBot) == in.eta1 &&
               x.edge(Face2::OneTop) == in.eta1_dom && x.edge(Face2::OneBot) == in.eta1_cod;
  if (!r.faces_ok) r.problem = {{"reason", "faces"}};
  if (!exhaustive) return r;

  // every 2-relation morphism satisfying the equation, searched edge by edge
  std::array<std::vector<RelMor>, 4> cands;
  for (int i = 0; i < 4; ++i) {
    auto f = static_cast<Face2>(i);
    for (auto& c : fm::all_rel_morphisms(x.src().edge(f), x.tgt().edge(f), cap))
      if (fm::compose(c, in.eps_src.edge(f)) == rhs.edge(f)) cands[static_cast<std::size_t>(i)].push_back(std::move(c));
  }
  for (const auto& a : cands[0])
    for (const auto& b : cands[1])
      for (const auto& c : cands[2])
        for (const auto& d : cands[3]) {
          std::optional<TwoRelMor> y;
          try {
            y = try_make(x.src(), x.tgt(), {a, b, c, d});
          } catch (const ModelError&) {
            continue;
          }
          if (y && compose(*y, in.eps_src) == rhs) ++r.solutions;
        }
  if (r.solutions != 1 && r.problem.is_null()) r.problem = {{"reason", "not unique"}, {"solutions", r.solutions}};
  return r;
}

nlohmann::json essential_surjectivity(const fib::Model& m, const TF& f) {
  if (f->arity != 0) throw ModelError("essential surjectivity is checked for closed functors");
  FinSet a = m.eval0(f, {});
  Rel v = m.eval1(f, {});
  RelMor e = m.epsilon(f, {});
  if (!(e.src() == fm::eq(a)) || !(e.tgt() == v)) return {{"functor", f->key}, {"reason", "boundary"}};
  if (!e.has_identity_faces()) return {{"functor", f->key}, {"reason", "faces"}};
  if (!e.is_iso()) return {{"functor", f->key}, {"reason", "not an iso"}};
  // (F(0), Eq F(0)) extends to level 2 through the degenerate square
  TwoRel q = eq_h(fm::eq(a));
  for (auto face : kFaces2)
    if (!(q.edge(face) == fm::eq(a))) return {{"functor", f->key}, {"reason", "degenerate extension"}};
  if (!fib::has_forall(f)) {
    auto e2 = epsilon2(m, f, Degen::EqH, {});
    if (!e2 || !e2->is_iso()) return {{"functor", f->key}, {"reason", "level-2 epsilon"}};
  }
  return nullptr;
}

// ---- membership

namespace {

template <class T>
std::vector<T> with(std::vector<T> env, const T& x) {
  env.push_back(x);
  return env;
}

std::size_t idx0(const fib::ProbeUniverse& u, const FinSet& a) {
  auto i = u.index0(a);
  if (!i) throw ModelError("object " + a.str() + " is not a probe");
  return *i;
}
std::size_t idx1(const fib::ProbeUniverse& u, const Rel& r) {
  auto i = u.index1(r);
  if (!i) throw ModelError("relation " + r.str() + " is not a probe");
  return *i;
}

void check_shape(const fib::ProbeUniverse& u, const Element& x) {
  if (x.f0.size() != u.objs0.size() || x.f1.size() != u.objs1.size())
    throw ModelError("element does not match the probe universe");
}

bool has_witness(const Rel& r, const Label& a, const Label& b, const Label& w) {
  if (!r.dom().contains(a) || !r.cod().contains(b)) return false;
  auto ws = r.witnesses(a, b);
  return std::find(ws.begin(), ws.end(), w) != ws.end();
}

// Relevant, non-identity isomorphisms between probe relations.
std::vector<std::tuple<std::size_t, std::size_t, RelMor>> rel_isos(const fib::ProbeUniverse& u) {
  std::vector<std::tuple<std::size_t, std::size_t, RelMor>> out;
  for (std::size_t i = 0; i < u.objs1.size(); ++i)
    for (std::size_t j = 0; j < u.objs1.size(); ++j)
      for (auto& iso : fm::all_rel_isos(u.objs1[i], u.objs1[j]))
        if (fm::relevant(u.policy, iso) && !iso.is_identity()) out.emplace_back(i, j, std::move(iso));
  return out;
}

}  // namespace

Forall2::Forall2(const fib::Model& m, TF body)
    : m_(m), body_(std::move(body)), squares_(probe_squares(m.universe())) {
  if (body_->arity < 1) throw ModelError("quantified body needs arity at least one");
  if (fib::has_forall(body_)) throw ModelError("the 2D quantifier is checked for quantifier-free bodies only");
  rel_isos_ = rel_isos(m.universe());
}

const std::vector<TwoRel>& Forall2::at_squares(const std::vector<TwoRel>& env) const {
  std::string key;
  for (const auto& q : env) key += q.str() + ";";
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::vector<TwoRel> vals;
  for (const auto& q : squares_) vals.push_back(eval2(body_, with(env, q)));
  return cache_.emplace(std::move(key), std::move(vals)).first->second;
}

Element Forall2::element(const std::vector<FinSet>& env, const Label& family) const {
  const auto& u = m_.universe();
  Element x;
  for (std::size_t j = 0; j < u.objs0.size(); ++j) x.f0.push_back(fib::Model::family_at(family, j));
  auto eqs = fib::eq_env(env);
  for (const auto& r : u.objs1) {
    auto w = m_.relates(body_, with(eqs, r), x.f0[idx0(u, r.dom())], x.f0[idx0(u, r.cod())]);
    x.f1.push_back(w ? *w : Label::sym("missing"));
  }
  return x;
}

std::vector<Label> Forall2::relate(const std::vector<Rel>& env, const Element& x, const Element& y) const {
  const auto& u = m_.universe();
  std::vector<Label> phi;
  for (const auto& r : u.objs1) {
    auto w = m_.relates(body_, with(env, r), x.f0[idx0(u, r.dom())], y.f0[idx0(u, r.cod())]);
    phi.push_back(w ? *w : Label::sym("missing"));
  }
  return phi;
}

Membership Forall2::level0(const std::vector<FinSet>& env, const Element& x) const {
  const auto& u = m_.universe();
  check_shape(u, x);
  auto fail = [&](nlohmann::json j) { return Membership{false, std::move(j)}; };
  for (std::size_t j = 0; j < u.objs0.size(); ++j)
    if (!m_.eval0(body_, with(env, u.objs0[j])).contains(x.f0[j]))
      return fail({{"obligation", "f0"}, {"probe", u.objs0[j].str()}});
  auto eqs = fib::eq_env(env);
  for (std::size_t k = 0; k < u.objs1.size(); ++k) {
    const Rel& r = u.objs1[k];
    if (!has_witness(m_.eval1(body_, with(eqs, r)), x.f0[idx0(u, r.dom())], x.f0[idx0(u, r.cod())], x.f1[k]))
      return fail({{"obligation", "f1"}, {"probe", r.str()}});
  }
  std::vector<TwoRel> flat;
  for (const auto& e : eqs) flat.push_back(eq_h(e));
  const auto& vals0 = at_squares(flat);
  for (std::size_t n = 0; n < squares_.size(); ++n) {
    const TwoRel& q = squares_[n];
    Cell c;
    for (int i = 0; i < 4; ++i) {
      c.corner[static_cast<std::size_t>(i)] = x.f0[idx0(u, q.corner(i))];
      c.witness[static_cast<std::size_t>(i)] = x.f1[idx1(u, q.edge(static_cast<Face2>(i)))];
    }
    if (!vals0[n].holds(c)) return fail({{"obligation", "f2"}, {"probe", q.str()}});
  }
  std::vector<FinFn> ids;
  for (const auto& a : env) ids.push_back(FinFn::identity(a));
  for (const auto& [src, iso] : u.isos0()) {
    FinFn act = m_.eval_mor0(body_, with(ids, iso));
    if (!(act(x.f0[src]) == x.f0[idx0(u, iso.cod())]))
      return fail({{"obligation", "f0 transport"}, {"probe", u.objs0[src].str()}});
  }
  std::vector<RelMor> eq_ids;
  for (const auto& e : eqs) eq_ids.push_back(RelMor::identity(e));
  for (const auto& [i, j, iso] : rel_isos_) {
    const Rel& r = u.objs1[i];
    RelMor act = m_.eval_mor1(body_, with(eq_ids, iso));
    if (!(act.act(x.f0[idx0(u, r.dom())], x.f0[idx0(u, r.cod())], x.f1[i]) == x.f1[j]))
      return fail({{"obligation", "f1 transport"}, {"probe", r.str()}});
  }
  return {};
}

Membership Forall2::level1(const std::vector<Rel>& env, const Element& x, const Element& y,
                           const std::vector<Label>& phi) const {
  const auto& u = m_.universe();
  check_shape(u, x);
  check_shape(u, y);
  if (phi.size() != u.objs1.size()) throw ModelError("relation family does not match the probe universe");
  auto fail = [&](nlohmann::json j) { return Membership{false, std::move(j)}; };
  for (std::size_t k = 0; k < u.objs1.size(); ++k) {
    const Rel& r = u.objs1[k];
    if (!has_witness(m_.eval1(body_, with(env, r)), x.f0[idx0(u, r.dom())], y.f0[idx0(u, r.cod())], phi[k]))
      return fail({{"obligation", "phi"}, {"probe", r.str()}});
  }
  for (auto d : kDegens) {
    const Shape& s = shape(d);
    const auto& vals = at_squares(degen_env(d, env));
    for (std::size_t n = 0; n < squares_.size(); ++n) {
      const TwoRel& q = squares_[n];
      Cell c;
      for (int i = 0; i < 4; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        c.corner[ii] = (s.corner_side[ii] == 0 ? x : y).f0[idx0(u, q.corner(i))];
        std::size_t e = idx1(u, q.edge(static_cast<Face2>(i)));
        switch (s.edge[ii]) {
          case EdgeRole::Rel: c.witness[ii] = phi[e]; break;
          case EdgeRole::EqDom: c.witness[ii] = x.f1[e]; break;
          case EdgeRole::EqCod: c.witness[ii] = y.f1[e]; break;
        }
      }
      if (!vals[n].holds(c))
        return fail({{"obligation", std::string("phi ") + to_string(d)}, {"probe", q.str()}});
    }
  }
  std::vector<RelMor> ids;
  for (const auto& r : env) ids.push_back(RelMor::identity(r));
  for (const auto& [i, j, iso] : rel_isos_) {
    const Rel& r = u.objs1[i];
    RelMor act = m_.eval_mor1(body_, with(ids, iso));
    if (!(act.act(x.f0[idx0(u, r.dom())], y.f0[idx0(u, r.cod())], phi[i]) == phi[j]))
      return fail({{"obligation", "phi transport"}, {"probe", r.str()}});
  }
  return {};
}

Membership Forall2::level2(const std::vector<TwoRel>& env, const std::array<Element, 4>& corners,
                           const std::array<std::vector<Label>, 4>& phis) const {
  const auto& u = m_.universe();
  for (const auto& x : corners) check_shape(u, x);
  for (const auto& p : phis)
    if (p.size() != u.objs1.size()) throw ModelError("relation family does not match the probe universe");
  const auto& vals = at_squares(env);
  for (std::size_t n = 0; n < squares_.size(); ++n) {
    const TwoRel& q = squares_[n];
    Cell c;
    for (int i = 0; i < 4; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      c.corner[ii] = corners[ii].f0[idx0(u, q.corner(i))];
      c.witness[ii] = phis[ii][idx1(u, q.edge(static_cast<Face2>(i)))];
    }
    if (!vals[n].holds(c)) return {false, {{"obligation", "square"}, {"probe", q.str()}}};
  }
  return {};
}

}  // namespace pwb::cube
