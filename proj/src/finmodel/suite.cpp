#include <algorithm>

#include "pwb/error.hpp"
#include "pwb/instance.hpp"

namespace pwb::fm {

namespace {

std::vector<FinSet> carriers(int bound) {
  std::vector<FinSet> out;
  for (int k = 1; k <= bound; ++k) out.push_back(FinSet::atoms(k));
  return out;
}

// A handful of relations per pair of carriers: empty, full, the first singleton,
// plus the equality relations.
std::vector<Rel> sample_relations(const std::vector<FinSet>& sets) {
  std::vector<Rel> out;
  for (const auto& a : sets) out.push_back(eq(a));
  for (const auto& a : sets)
    for (const auto& b : sets) {
      std::vector<std::pair<Label, Label>> full;
      for (const auto& x : a.elements())
        for (const auto& y : b.elements()) full.emplace_back(x, y);
      out.push_back(Rel::from_pairs(a, b, {}));
      out.push_back(Rel::from_pairs(a, b, full));
      out.push_back(Rel::from_pairs(a, b, {{a.at(a.size() - 1), b.at(0)}}));
    }
  return out;
}

Json fn_json(const FinFn& f) { return to_json(f); }

}  // namespace

Report finmodel_suite(Policy p, int bound) {
  Report r;
  if (bound < 1) throw ModelError("carrier bound must be at least 1");
  auto sets = carriers(bound);
  auto small = carriers(std::min(bound, 2));

  // Eq is a functor and a section of both faces
  Tally eqf{"fm.eq.functor", "fm.eq"}, eqs{"fm.eq.section", "fm.eq"};
  for (const auto& a : sets) {
    eqf.record(eq(FinFn::identity(a)) == RelMor::identity(eq(a)), [&] { return Json{{"set", to_json(a)}}; });
    eqs.record(eq(a).dom() == a && eq(a).cod() == a, [&] { return Json{{"set", to_json(a)}}; });
    for (const auto& b : sets)
      for (const auto& f : all_functions(a, b)) {
        RelMor ef = eq(f);
        eqs.record(ef.f() == f && ef.g() == f, [&] { return Json{{"f", fn_json(f)}}; });
        for (const auto& c : sets)
          for (const auto& g : all_functions(b, c))
            eqf.record(eq(compose(g, f)) == compose(eq(g), ef), [&] { return Json{{"f", fn_json(f)}, {"g", fn_json(g)}}; });
      }
  }
  eqf.emit(r);
  eqs.emit(r);

  // level 0 cartesian closed structure
  Tally term0{"fm.ccc0.terminal", "ccc.terminal"}, prod0{"fm.ccc0.product", "ccc.product"},
      exp0{"fm.ccc0.exponential", "ccc.exponential"};
  for (const auto& a : sets) {
    auto fs = all_functions(a, terminal());
    term0.record(fs.size() == 1 && fs[0] == bang(a), [&] { return Json{{"set", to_json(a)}}; });
  }
  for (const auto& a : small)
    for (const auto& b : small) {
      FinSet ab = product(a, b);
      prod0.record(pairing(fst(a, b), snd(a, b)) == FinFn::identity(ab), [&] { return Json{{"a", to_json(a)}, {"b", to_json(b)}}; });
      for (const auto& c : small) {
        for (const auto& f : all_functions(c, a))
          for (const auto& g : all_functions(c, b)) {
            FinFn h = pairing(f, g);
            prod0.record(compose(fst(a, b), h) == f && compose(snd(a, b), h) == g,
                         [&] { return Json{{"f", fn_json(f)}, {"g", fn_json(g)}}; });
          }
        for (const auto& h : all_functions(c, ab))
          prod0.record(pairing(compose(fst(a, b), h), compose(snd(a, b), h)) == h, [&] { return Json{{"h", fn_json(h)}}; });
        FinSet ca = product(c, a);
        for (const auto& f : all_functions(ca, b)) {
          FinFn lam = curry(f, c, a);
          exp0.record(compose(eval(a, b), prod_map(lam, FinFn::identity(a))) == f, [&] { return Json{{"f", fn_json(f)}}; });
        }
        for (const auto& k : all_functions(c, exponential(a, b)))
          exp0.record(curry(compose(eval(a, b), prod_map(k, FinFn::identity(a))), c, a) == k,
                      [&] { return Json{{"k", fn_json(k)}}; });
      }
    }
  term0.emit(r);
  prod0.emit(r);
  exp0.emit(r);

  // level 1
  auto rels = sample_relations(small);
  Tally term1{"fm.ccc1.terminal", "ccc.terminal"}, prod1{"fm.ccc1.product", "ccc.product"},
      exp1{"fm.ccc1.exponential", "ccc.exponential"}, stab{"fm.faces.stable", "ccc.stability"},
      prop{"fm.propositional", "fm.proprel"};
  for (const auto& t : rels) {
    auto ms = all_rel_morphisms(t, terminal_rel());
    term1.record(ms.size() == 1 && ms[0] == bang(t), [&] { return Json{{"rel", to_json(t)}}; });
  }
  stab.record(terminal_rel().dom() == terminal() && terminal_rel().cod() == terminal(), nullptr);
  for (const auto& x : rels)
    for (const auto& y : rels) {
      Rel pr = product(x, y), ex = exponential(x, y);
      stab.record(pr.dom() == product(x.dom(), y.dom()) && pr.cod() == product(x.cod(), y.cod()) &&
                      ex.dom() == exponential(x.dom(), y.dom()) && ex.cod() == exponential(x.cod(), y.cod()),
                  [&] { return Json{{"r", to_json(x)}, {"s", to_json(y)}}; });
      prop.record(pr.is_propositional() && ex.is_propositional(), [&] { return Json{{"r", to_json(x)}, {"s", to_json(y)}}; });
      prod1.record(pairing(fst(x, y), snd(x, y)) == RelMor::identity(pr), [&] { return Json{{"r", to_json(x)}, {"s", to_json(y)}}; });
    }
  // beta and eta laws on a few relations of each shape
  std::vector<Rel> few;
  for (const auto& x : rels)
    if (x.dom().size() + x.cod().size() <= 3 || x.pair_count() == 1 || x.dom() == x.cod()) few.push_back(x);
  if (few.size() > 8) few.resize(8);
  for (const auto& x : few)
    for (const auto& y : few)
      for (const auto& t : few) {
        for (const auto& m : all_rel_morphisms(t, x, 64))
          for (const auto& n : all_rel_morphisms(t, y, 64)) {
            RelMor h = pairing(m, n);
            prod1.record(compose(fst(x, y), h) == m && compose(snd(x, y), h) == n,
                         [&] { return Json{{"m", to_json(m)}, {"n", to_json(n)}}; });
          }
        Rel tx = product(t, x);
        for (const auto& m : all_rel_morphisms(tx, y, 64)) {
          RelMor lam = curry(m, t, x);
          exp1.record(compose(eval(x, y), prod_map(lam, RelMor::identity(x))) == m, [&] { return Json{{"m", to_json(m)}}; });
        }
        for (const auto& k : all_rel_morphisms(t, exponential(x, y), 64))
          exp1.record(curry(compose(eval(x, y), prod_map(k, RelMor::identity(x))), t, x) == k,
                      [&] { return Json{{"k", to_json(k)}}; });
      }
  term1.emit(r);
  prod1.emit(r);
  exp1.emit(r);
  stab.emit(r);
  prop.emit(r);

  // equality relations of exponentials relate exactly equal tables
  Tally ext{"fm.exp.eq_extensional", "ccc.exponential.eq"};
  for (const auto& a : small)
    for (const auto& b : small) {
      Rel e = exponential(eq(a), eq(b));
      for (const auto& f : e.dom().elements())
        for (const auto& g : e.cod().elements())
          ext.record(e.related(f, g) == (f == g), [&] { return Json{{"f", f.str()}, {"g", g.str()}}; });
    }
  ext.emit(r);

  // eta isomorphisms: faces, invertibility, naturality
  Tally efaces{"fm.eta.faces", "eta.coherence"}, eiso{"fm.eta.iso", "eta.coherence"},
      enat_p{"fm.eta_prod.natural", "eta.naturality"}, enat_e{"fm.eta_exp.natural", "eta.naturality"},
      erel{"fm.eta.relevant", "iso.policy"};
  {
    RelMor u = eta_unit();
    efaces.record(u.has_identity_faces(), [] { return Json{{"eta", "unit"}}; });
    eiso.record(u.is_iso(), [] { return Json{{"eta", "unit"}}; });
  }
  bool want_relevant = p != Policy::Strict;
  for (const auto& a : small)
    for (const auto& b : small) {
      RelMor ep = eta_prod(a, b), ee = eta_exp(a, b);
      Json at{{"a", to_json(a)}, {"b", to_json(b)}};
      efaces.record(ep.has_identity_faces() && ee.has_identity_faces(), [&] { return at; });
      eiso.record(ep.is_iso() && ee.is_iso(), [&] { return at; });
      erel.record(relevant(p, ep) == want_relevant && relevant(p, ee) == want_relevant, [&] { return at; });
      for (const auto& a2 : small)
        for (const auto& b2 : small) {
          RelMor ep2 = eta_prod(a2, b2), ee2 = eta_exp(a2, b2);
          for (const auto& f : all_functions(a, a2))
            for (const auto& g : all_functions(b, b2))
              enat_p.record(compose(ep2, eq(prod_map(f, g))) == compose(prod_map(eq(f), eq(g)), ep),
                            [&] { return Json{{"f", fn_json(f)}, {"g", fn_json(g)}}; });
          for (const auto& i : all_bijections(a, a2))
            for (const auto& j : all_functions(b, b2))
              enat_e.record(compose(ee2, eq(exp_map(i, j))) == compose(exp_map(eq(i), eq(j)), ee),
                            [&] { return Json{{"i", fn_json(i)}, {"j", fn_json(j)}}; });
        }
    }
  efaces.emit(r);
  eiso.emit(r);
  enat_p.emit(r);
  enat_e.emit(r);
  erel.emit(r);

  // the selection of the policy
  {
    auto inst = build_instance(p, std::min(bound, 2));
    r.append(rg::validate_rg(*inst->cat, inst->iso));
  }
  return r;
}

}  // namespace pwb::fm
