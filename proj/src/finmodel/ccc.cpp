#include <cmath>

#include "pwb/error.hpp"
#include "pwb/finmodel.hpp"

namespace pwb::fm {

// ---- level 0

FinSet terminal() {
  static const FinSet one = FinSet::of({Label::star()});
  return one;
}

FinSet product(const FinSet& a, const FinSet& b) {
  if (static_cast<double>(a.size()) * static_cast<double>(b.size()) > static_cast<double>(limits().max_set))
    throw SizeExceeded("product of " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " elements");
  std::vector<Label> xs;
  xs.reserve(a.size() * b.size());
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) xs.push_back(Label::pair(x, y));
  return FinSet::of(std::move(xs));
}

FinSet exponential(const FinSet& a, const FinSet& b) {
  double total = std::pow(static_cast<double>(b.size()), static_cast<double>(a.size()));
  if (total > static_cast<double>(limits().max_set))
    throw SizeExceeded("exponential " + std::to_string(b.size()) + "^" + std::to_string(a.size()) +
                       " exceeds the size limit");
  std::vector<Label> xs;
  if (a.empty()) {
    xs.push_back(Label::table({}));
    return FinSet::of(std::move(xs));
  }
  if (b.empty()) return FinSet();
  xs.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> idx(a.size(), 0);
  for (;;) {
    std::vector<Label> kv;
    kv.reserve(2 * a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      kv.push_back(a.at(i));
      kv.push_back(b.at(idx[i]));
    }
    xs.push_back(Label::table(std::move(kv)));
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < b.size()) break;
      idx[k] = 0;
      if (k == 0) return FinSet::of(std::move(xs));
    }
  }
}

FinFn bang(const FinSet& a) { return FinFn::from_indices(a, terminal(), std::vector<std::uint32_t>(a.size(), 0)); }

FinFn fst(const FinSet& a, const FinSet& b) {
  return FinFn::build(product(a, b), a, [](const Label& p) { return p.child(0); });
}

FinFn snd(const FinSet& a, const FinSet& b) {
  return FinFn::build(product(a, b), b, [](const Label& p) { return p.child(1); });
}

FinFn pairing(const FinFn& f, const FinFn& g) {
  if (!(f.dom() == g.dom())) throw ModelError("pairing of functions with different domains");
  return FinFn::build(f.dom(), product(f.cod(), g.cod()), [&](const Label& x) { return Label::pair(f(x), g(x)); });
}

FinFn prod_map(const FinFn& f, const FinFn& g) {
  return FinFn::build(product(f.dom(), g.dom()), product(f.cod(), g.cod()),
                      [&](const Label& p) { return Label::pair(f(p.child(0)), g(p.child(1))); });
}

FinFn eval(const FinSet& a, const FinSet& b) {
  return FinFn::build(product(exponential(a, b), a), b,
                      [](const Label& p) { return p.child(0).lookup(p.child(1)); });
}

FinFn curry(const FinFn& f, const FinSet& c, const FinSet& a) {
  if (!(product(c, a) == f.dom())) throw ModelError("curry expects a function out of c x a");
  return FinFn::build(c, exponential(a, f.cod()), [&](const Label& x) {
    std::vector<Label> kv;
    for (const auto& y : a.elements()) {
      kv.push_back(y);
      kv.push_back(f(Label::pair(x, y)));
    }
    return Label::table(std::move(kv));
  });
}

FinFn exp_map(const FinFn& i, const FinFn& j) {
  FinFn inv = i.inverse();
  return FinFn::build(exponential(i.dom(), j.dom()), exponential(i.cod(), j.cod()), [&](const Label& phi) {
    std::vector<Label> kv;
    for (const auto& y : i.cod().elements()) {
      kv.push_back(y);
      kv.push_back(j(phi.lookup(inv(y))));
    }
    return Label::table(std::move(kv));
  });
}

// ---- level 1

Rel terminal_rel() {
  static const Rel one = Rel::make(terminal(), terminal(), {{Label::star(), Label::star(), Label::tt()}});
  return one;
}

Rel product(const Rel& r, const Rel& s) {
  FinSet dom = product(r.dom(), s.dom());
  FinSet cod = product(r.cod(), s.cod());
  std::vector<Rel::Entry> es;
  es.reserve(r.pair_count() * s.pair_count());
  const auto sd = static_cast<std::uint32_t>(s.dom().size());
  const auto sc = static_cast<std::uint32_t>(s.cod().size());
  for (const auto& e1 : r.entries())
    for (const auto& e2 : s.entries()) {
      Rel::Entry e{e1.a * sd + e2.a, e1.b * sc + e2.b, {}};
      e.ws.reserve(e1.ws.size() * e2.ws.size());
      for (const auto& p : e1.ws)
        for (const auto& q : e2.ws) e.ws.push_back(Label::pair(p, q));
      es.push_back(std::move(e));
    }
  return Rel::from_entries(std::move(dom), std::move(cod), std::move(es));
}

Rel exponential(const Rel& r, const Rel& s) {
  FinSet dom = exponential(r.dom(), s.dom());
  FinSet cod = exponential(r.cod(), s.cod());
  if (static_cast<double>(dom.size()) * static_cast<double>(cod.size()) > static_cast<double>(limits().max_pairs))
    throw SizeExceeded("exponential relation over " + std::to_string(dom.size()) + "x" + std::to_string(cod.size()) +
                       " pairs exceeds the size limit");
  // image indices of each table at each point
  auto images = [](const FinSet& funs, const FinSet& src, const FinSet& tgt) {
    std::vector<std::vector<std::uint32_t>> out(funs.size());
    for (std::size_t k = 0; k < funs.size(); ++k) {
      out[k].reserve(src.size());
      for (const auto& x : src.elements())
        out[k].push_back(static_cast<std::uint32_t>(tgt.index(funs.at(k).lookup(x))));
    }
    return out;
  };
  auto fimg = images(dom, r.dom(), s.dom());
  auto gimg = images(cod, r.cod(), s.cod());
  std::vector<Label> keys;
  std::vector<std::uint32_t> key_a, key_b;
  for (const auto& e : r.entries())
    for (const auto& w : e.ws) {
      keys.push_back(triple(r.dom().at(e.a), r.cod().at(e.b), w));
      key_a.push_back(e.a);
      key_b.push_back(e.b);
    }
  std::vector<std::int64_t> cell(s.dom().size() * s.cod().size(), -1);
  for (std::size_t e = 0; e < s.entries().size(); ++e) {
    const auto& en = s.entries()[e];
    cell[en.a * s.cod().size() + en.b] = static_cast<std::int64_t>(e);
  }
  std::vector<Rel::Entry> es;
  std::size_t total = 0;
  std::vector<const std::vector<Label>*> choice(keys.size());
  for (std::uint32_t fi = 0; fi < dom.size(); ++fi)
    for (std::uint32_t gi = 0; gi < cod.size(); ++gi) {
      bool ok = true;
      for (std::size_t k = 0; k < keys.size() && ok; ++k) {
        auto c = cell[fimg[fi][key_a[k]] * s.cod().size() + gimg[gi][key_b[k]]];
        if (c < 0)
          ok = false;
        else
          choice[k] = &s.entries()[static_cast<std::size_t>(c)].ws;
      }
      if (!ok) continue;
      Rel::Entry en{fi, gi, {}};
      std::vector<std::size_t> pick(keys.size(), 0);
      for (;;) {
        std::vector<Label> kv;
        kv.reserve(2 * keys.size());
        for (std::size_t k = 0; k < keys.size(); ++k) {
          kv.push_back(keys[k]);
          kv.push_back((*choice[k])[pick[k]]);
        }
        en.ws.push_back(Label::dep(std::move(kv)));
        if (++total > limits().max_witnesses) throw SizeExceeded("exponential relation has too many witnesses");
        std::size_t k = pick.size();
        bool done = true;
        while (k > 0) {
          --k;
          if (++pick[k] < choice[k]->size()) {
            done = false;
            break;
          }
          pick[k] = 0;
        }
        if (done) break;
      }
      es.push_back(std::move(en));
    }
  return Rel::from_entries(std::move(dom), std::move(cod), std::move(es));
}

RelMor bang(const Rel& r) {
  return RelMor::build(r, terminal_rel(), bang(r.dom()), bang(r.cod()), [](const Witness&) { return Label::tt(); });
}

RelMor fst(const Rel& r, const Rel& s) {
  return RelMor::build(product(r, s), r, fst(r.dom(), s.dom()), fst(r.cod(), s.cod()),
                       [](const Witness& x) { return x.w.child(0); });
}

RelMor snd(const Rel& r, const Rel& s) {
  return RelMor::build(product(r, s), s, snd(r.dom(), s.dom()), snd(r.cod(), s.cod()),
                       [](const Witness& x) { return x.w.child(1); });
}

RelMor pairing(const RelMor& m, const RelMor& n) {
  if (!(m.src() == n.src())) throw ModelError("pairing of relation morphisms with different sources");
  return RelMor::build(m.src(), product(m.tgt(), n.tgt()), pairing(m.f(), n.f()), pairing(m.g(), n.g()),
                       [&](const Witness& x) { return Label::pair(m.act(x.a, x.b, x.w), n.act(x.a, x.b, x.w)); });
}

RelMor prod_map(const RelMor& m, const RelMor& n) {
  return RelMor::build(product(m.src(), n.src()), product(m.tgt(), n.tgt()), prod_map(m.f(), n.f()),
                       prod_map(m.g(), n.g()), [&](const Witness& x) {
                         return Label::pair(m.act(x.a.child(0), x.b.child(0), x.w.child(0)),
                                            n.act(x.a.child(1), x.b.child(1), x.w.child(1)));
                       });
}

RelMor eval(const Rel& r, const Rel& s) {
  return RelMor::build(product(exponential(r, s), r), s, eval(r.dom(), s.dom()), eval(r.cod(), s.cod()),
                       [](const Witness& x) {
                         return x.w.child(0).lookup(triple(x.a.child(1), x.b.child(1), x.w.child(1)));
                       });
}

RelMor curry(const RelMor& m, const Rel& t, const Rel& r) {
  if (!(product(t, r) == m.src())) throw ModelError("curry expects a relation morphism out of t x r");
  return RelMor::build(t, exponential(r, m.tgt()), curry(m.f(), t.dom(), r.dom()), curry(m.g(), t.cod(), r.cod()),
                       [&](const Witness& x) {
                         std::vector<Label> kv;
                         kv.reserve(2 * r.witness_count());
                         for (std::size_t k = 0; k < r.witness_count(); ++k) {
                           Witness y = r.witness_at(k);
                           kv.push_back(triple(y.a, y.b, y.w));
                           kv.push_back(m.act(Label::pair(x.a, y.a), Label::pair(x.b, y.b), Label::pair(x.w, y.w)));
                         }
                         return Label::dep(std::move(kv));
                       });
}

RelMor exp_map(const RelMor& i, const RelMor& j) {
  RelMor inv = i.inverse();
  return RelMor::build(exponential(i.src(), j.src()), exponential(i.tgt(), j.tgt()), exp_map(i.f(), j.f()),
                       exp_map(i.g(), j.g()), [&](const Witness& x) {
                         std::vector<Label> kv;
                         const Rel& r2 = i.tgt();
                         kv.reserve(2 * r2.witness_count());
                         for (std::size_t k = 0; k < r2.witness_count(); ++k) {
                           Witness y = r2.witness_at(k);
                           Witness pre = inv.apply(y);
                           const Label& d = x.w.lookup(triple(pre.a, pre.b, pre.w));
                           kv.push_back(triple(y.a, y.b, y.w));
                           kv.push_back(j.act(x.a.lookup(pre.a), x.b.lookup(pre.b), d));
                         }
                         return Label::dep(std::move(kv));
                       });
}

RelMor eta_unit() {
  return RelMor::build(eq(terminal()), terminal_rel(), FinFn::identity(terminal()), FinFn::identity(terminal()),
                       [](const Witness&) { return Label::tt(); });
}

RelMor eta_prod(const FinSet& a, const FinSet& b) {
  FinSet ab = product(a, b);
  return RelMor::build(eq(ab), product(eq(a), eq(b)), FinFn::identity(ab), FinFn::identity(ab),
                       [](const Witness& x) {
                         return Label::pair(Label::refl(x.a.child(0)), Label::refl(x.a.child(1)));
                       });
}

RelMor eta_exp(const FinSet& a, const FinSet& b) {
  FinSet ab = exponential(a, b);
  return RelMor::build(eq(ab), exponential(eq(a), eq(b)), FinFn::identity(ab), FinFn::identity(ab),
                       [&](const Witness& x) {
                         std::vector<Label> kv;
                         for (const auto& y : a.elements()) {
                           kv.push_back(triple(y, y, Label::refl(y)));
                           kv.push_back(Label::refl(x.a.lookup(y)));
                         }
                         return Label::dep(std::move(kv));
                       });
}

}  // namespace pwb::fm
