#include "pwb/error.hpp"
#include "pwb/fibration.hpp"

namespace pwb::fib::nat {

namespace {

template <class T>
std::vector<T> extend(std::vector<T> env, T x) {
  env.push_back(std::move(x));
  return env;
}

template <class T>
std::vector<T> prefix(const std::vector<T>& env) {
  if (env.empty()) throw ModelError("counit needs a non-empty environment");
  return std::vector<T>(env.begin(), env.end() - 1);
}

}  // namespace

NatRep id(const TF& f) {
  return {f, f, [f](const Model& m, const std::vector<FinSet>& e) { return FinFn::identity(m.eval0(f, e)); },
          [f](const Model& m, const std::vector<Rel>& e) { return RelMor::identity(m.eval1(f, e)); }, "id"};
}

NatRep compose(const NatRep& n, const NatRep& m) {
  if (!same(m.tgt, n.src)) throw ModelError("composition of natural transformations with mismatched functors");
  return {m.src, n.tgt,
          [n, m](const Model& md, const std::vector<FinSet>& e) { return fm::compose(n.at0(md, e), m.at0(md, e)); },
          [n, m](const Model& md, const std::vector<Rel>& e) { return fm::compose(n.at1(md, e), m.at1(md, e)); },
          n.name + " . " + m.name};
}

NatRep terminal(const TF& f) {
  return {f, unit_f(f->arity), [f](const Model& m, const std::vector<FinSet>& e) { return fm::bang(m.eval0(f, e)); },
          [f](const Model& m, const std::vector<Rel>& e) { return fm::bang(m.eval1(f, e)); }, "!"};
}

NatRep fst(const TF& f, const TF& g) {
  return {prod_f(f, g), f,
          [f, g](const Model& m, const std::vector<FinSet>& e) { return fm::fst(m.eval0(f, e), m.eval0(g, e)); },
          [f, g](const Model& m, const std::vector<Rel>& e) { return fm::fst(m.eval1(f, e), m.eval1(g, e)); }, "fst"};
}

NatRep snd(const TF& f, const TF& g) {
  return {prod_f(f, g), g,
          [f, g](const Model& m, const std::vector<FinSet>& e) { return fm::snd(m.eval0(f, e), m.eval0(g, e)); },
          [f, g](const Model& m, const std::vector<Rel>& e) { return fm::snd(m.eval1(f, e), m.eval1(g, e)); }, "snd"};
}

NatRep pair(const NatRep& a, const NatRep& b) {
  if (!same(a.src, b.src)) throw ModelError("pairing of natural transformations with different sources");
  return {a.src, prod_f(a.tgt, b.tgt),
          [a, b](const Model& m, const std::vector<FinSet>& e) { return fm::pairing(a.at0(m, e), b.at0(m, e)); },
          [a, b](const Model& m, const std::vector<Rel>& e) { return fm::pairing(a.at1(m, e), b.at1(m, e)); },
          "<" + a.name + ", " + b.name + ">"};
}

NatRep prod_map(const NatRep& a, const NatRep& b) {
  return {prod_f(a.src, b.src), prod_f(a.tgt, b.tgt),
          [a, b](const Model& m, const std::vector<FinSet>& e) { return fm::prod_map(a.at0(m, e), b.at0(m, e)); },
          [a, b](const Model& m, const std::vector<Rel>& e) { return fm::prod_map(a.at1(m, e), b.at1(m, e)); },
          a.name + " x " + b.name};
}

NatRep eval(const TF& f, const TF& g) {
  return {prod_f(arrow_f(f, g), f), g,
          [f, g](const Model& m, const std::vector<FinSet>& e) { return fm::eval(m.eval0(f, e), m.eval0(g, e)); },
          [f, g](const Model& m, const std::vector<Rel>& e) { return fm::eval(m.eval1(f, e), m.eval1(g, e)); }, "ev"};
}

NatRep curry(const NatRep& a, const TF& h, const TF& f) {
  if (!same(a.src, prod_f(h, f))) throw ModelError("curry expects a transformation out of H x F");
  return {h, arrow_f(f, a.tgt),
          [a, h, f](const Model& m, const std::vector<FinSet>& e) {
            return fm::curry(a.at0(m, e), m.eval0(h, e), m.eval0(f, e));
          },
          [a, h, f](const Model& m, const std::vector<Rel>& e) {
            return fm::curry(a.at1(m, e), m.eval1(h, e), m.eval1(f, e));
          },
          "lambda(" + a.name + ")"};
}

NatRep forall_map(const NatRep& a) {
  TF src = forall_f(a.src), tgt = forall_f(a.tgt);
  auto at0 = [a, src, tgt](const Model& m, const std::vector<FinSet>& e) {
    const auto& u = m.universe();
    std::vector<FinFn> parts;
    for (const auto& p : u.objs0) parts.push_back(a.at0(m, extend(e, p)));
    return FinFn::build(m.eval0(src, e), m.eval0(tgt, e), [&](const Label& x) {
      std::vector<Label> ys;
      for (std::size_t j = 0; j < parts.size(); ++j) ys.push_back(parts[j](Model::family_at(x, j)));
      return Label::family(Label::tuple(std::move(ys)));
    });
  };
  auto at1 = [a, src, tgt, at0](const Model& m, const std::vector<Rel>& e) {
    const auto& u = m.universe();
    std::vector<RelMor> parts;
    for (const auto& r : u.objs1) parts.push_back(a.at1(m, extend(e, r)));
    return RelMor::build(m.eval1(src, e), m.eval1(tgt, e), at0(m, dom_env(e)), at0(m, cod_env(e)),
                         [&](const fm::Witness& x) {
                           std::vector<Label> ws;
                           for (std::size_t j = 0; j < parts.size(); ++j) {
                             const Rel& r = u.objs1[j];
                             ws.push_back(parts[j].act(Model::family_at(x.a, *u.index0(r.dom())),
                                                       Model::family_at(x.b, *u.index0(r.cod())),
                                                       Model::family_at(x.w, j)));
                           }
                           return Label::family(Label::tuple(std::move(ws)));
                         });
  };
  return {src, tgt, at0, at1, "forall(" + a.name + ")"};
}

NatRep transpose(const NatRep& a, const TF& f) {
  if (!same(a.src, weaken(f))) throw ModelError("transpose expects a transformation out of the weakening of " + f->key);
  TF tgt = forall_f(a.tgt);
  auto at0 = [a, f, tgt](const Model& m, const std::vector<FinSet>& e) {
    const auto& u = m.universe();
    std::vector<FinFn> parts;
    for (const auto& p : u.objs0) parts.push_back(a.at0(m, extend(e, p)));
    return FinFn::build(m.eval0(f, e), m.eval0(tgt, e), [&](const Label& x) {
      std::vector<Label> ys;
      for (const auto& part : parts) ys.push_back(part(x));
      return Label::family(Label::tuple(std::move(ys)));
    });
  };
  auto at1 = [a, f, tgt, at0](const Model& m, const std::vector<Rel>& e) {
    const auto& u = m.universe();
    std::vector<RelMor> parts;
    for (const auto& r : u.objs1) parts.push_back(a.at1(m, extend(e, r)));
    return RelMor::build(m.eval1(f, e), m.eval1(tgt, e), at0(m, dom_env(e)), at0(m, cod_env(e)),
                         [&](const fm::Witness& x) {
                           std::vector<Label> ws;
                           for (const auto& part : parts) ws.push_back(part.act(x.a, x.b, x.w));
                           return Label::family(Label::tuple(std::move(ws)));
                         });
  };
  return {f, tgt, at0, at1, "transpose(" + a.name + ")"};
}

NatRep counit(const TF& g) {
  TF all = forall_f(g);
  TF src = weaken(all);
  auto at0 = [g, all](const Model& m, const std::vector<FinSet>& e) {
    auto j = m.universe().index0(e.back());
    if (!j) throw ClosureError("counit at " + e.back().str() + ", which is not a probe object");
    return FinFn::build(m.eval0(all, prefix(e)), m.eval0(g, e),
                        [&](const Label& x) { return Model::family_at(x, *j); });
  };
  auto at1 = [g, all, at0](const Model& m, const std::vector<Rel>& e) {
    auto j = m.universe().index1(e.back());
    if (!j) throw ClosureError("counit at " + e.back().str() + ", which is not a probe relation");
    return RelMor::build(m.eval1(all, prefix(e)), m.eval1(g, e), at0(m, dom_env(e)), at0(m, cod_env(e)),
                         [&](const fm::Witness& x) { return Model::family_at(x.w, *j); });
  };
  return {src, g, at0, at1, "counit"};
}

}  // namespace pwb::fib::nat
