#include <random>

#include "pwb/cube.hpp"
#include "pwb/error.hpp"

namespace pwb::cube {

namespace {

nlohmann::json rel_json(const Rel& r) { return fm::to_json(r); }

// Small natural transformations between unary functors whose values stay within the probe carriers.
std::vector<fib::NatRep> small_nats() {
  TF p = fib::proj(1, 0), u = fib::unit_f(1);
  TF ex = fib::arrow_f(u, p);
  std::vector<fib::NatRep> out{
      fib::nat::id(p),
      fib::nat::id(u),
      fib::nat::terminal(p),
      fib::nat::snd(u, p),
      fib::nat::fst(p, u),
      fib::nat::pair(fib::nat::terminal(p), fib::nat::id(p)),
      fib::nat::pair(fib::nat::id(p), fib::nat::terminal(p)),
      fib::nat::curry(fib::nat::fst(p, u), p, u),
      fib::nat::compose(fib::nat::snd(u, p), fib::nat::pair(fib::nat::terminal(p), fib::nat::id(p))),
      fib::nat::terminal(ex),
  };
  return out;
}

}  // namespace

Report cube_suite(const fib::Model& m, const std::vector<TF>& pool, const CubeOptions& opt) {
  Report r;
  fm::LimitsGuard limits({1024, 1u << 16, 1u << 12});
  std::mt19937_64 rng(opt.seed);
  const auto& u = m.universe();

  // the six face equations, on relations and on their morphisms
  {
    Report::Timer timer(r);
    Tally eqh_id{"cube.bullet.eqh_id", "cube.faces"}, eqh_eq{"cube.bullet.eqh_eq", "cube.faces"},
        eqv_id{"cube.bullet.eqv_id", "cube.faces"}, eqv_eq{"cube.bullet.eqv_eq", "cube.faces"},
        conn_id{"cube.bullet.conn_id", "cube.faces"}, conn_eq{"cube.bullet.conn_eq", "cube.faces"},
        eq1{"cube.faces.eq", "cube.faces"};
    using F = Face2;
    for (const auto& x : witrels(opt.bound, 2)) {
      auto cx = [&] { return nlohmann::json{{"relation", rel_json(x)}}; };
      Rel ed = fm::eq(x.dom()), ec = fm::eq(x.cod());
      TwoRel h = eq_h(x), v = eq_v(x), t = conn_top(x), b = conn_bot(x);
      eq1.record(ed.dom() == x.dom() && ed.cod() == x.dom() && ec.dom() == x.cod() && ec.cod() == x.cod(), cx);
      eqh_id.record(h.edge(F::ZeroTop) == x && h.edge(F::ZeroBot) == x, cx);
      eqh_eq.record(h.edge(F::OneTop) == ed && h.edge(F::OneBot) == ec, cx);
      eqv_id.record(v.edge(F::OneTop) == x && v.edge(F::OneBot) == x, cx);
      eqv_eq.record(v.edge(F::ZeroTop) == ed && v.edge(F::ZeroBot) == ec, cx);
      conn_id.record(t.edge(F::ZeroTop) == x && t.edge(F::OneTop) == x && b.edge(F::ZeroBot) == x &&
                         b.edge(F::OneBot) == x,
                     cx);
      conn_eq.record(t.edge(F::ZeroBot) == ec && t.edge(F::OneBot) == ec && b.edge(F::ZeroTop) == ed &&
                         b.edge(F::OneTop) == ed,
                     cx);
    }
    auto rels = witrels(opt.bound, 1);
    for (const auto& x : rels)
      for (const auto& y : rels)
        for (const auto& mor : fm::all_rel_morphisms(x, y)) {
          auto cx = [&] { return nlohmann::json{{"morphism", fm::to_json(mor)}}; };
          RelMor ed = fm::eq(mor.f()), ec = fm::eq(mor.g());
          TwoRelMor h = eq_h(mor), v = eq_v(mor), t = conn_top(mor), b = conn_bot(mor);
          eqh_id.record(h.edge(F::ZeroTop) == mor && h.edge(F::ZeroBot) == mor, cx);
          eqh_eq.record(h.edge(F::OneTop) == ed && h.edge(F::OneBot) == ec, cx);
          eqv_id.record(v.edge(F::OneTop) == mor && v.edge(F::OneBot) == mor, cx);
          eqv_eq.record(v.edge(F::ZeroTop) == ed && v.edge(F::ZeroBot) == ec, cx);
          conn_id.record(t.edge(F::ZeroTop) == mor && t.edge(F::OneTop) == mor && b.edge(F::ZeroBot) == mor &&
                             b.edge(F::OneBot) == mor,
                         cx);
          conn_eq.record(t.edge(F::ZeroBot) == ec && t.edge(F::OneBot) == ec && b.edge(F::ZeroTop) == ed &&
                             b.edge(F::OneTop) == ed,
                         cx);
        }
    for (auto* t : {&eq1, &eqh_id, &eqh_eq, &eqv_id, &eqv_eq, &conn_id, &conn_eq}) t->emit(r);
  }

  // degeneracies and connections are functors
  {
    Report::Timer timer(r);
    Tally ids{"cube.functor.identity", "cube.functorial"}, comp{"cube.functor.compose", "cube.functorial"};
    auto rels = witrels(opt.bound, 2);
    for (const auto& x : rels)
      for (auto d : kDegens)
        ids.record(degen(d, RelMor::identity(x)) == TwoRelMor::identity(degen(d, x)),
                   [&] { return nlohmann::json{{"degeneracy", to_string(d)}, {"relation", rel_json(x)}}; });
    std::uniform_int_distribution<std::size_t> pick(0, rels.size() - 1);
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < opt.samples; ++k) {
      const Rel &x = rels[pick(rng)], &y = rels[pick(rng)], &z = rels[pick(rng)];
      std::vector<RelMor> ms, ns;
      try {
        ms = fm::all_rel_morphisms(x, y, 4096);
        ns = fm::all_rel_morphisms(y, z, 4096);
      } catch (const SizeExceeded&) {
        ++skipped;
        continue;
      }
      if (ms.empty() || ns.empty()) {
        ++skipped;
        continue;
      }
      const RelMor& a = ms[std::uniform_int_distribution<std::size_t>(0, ms.size() - 1)(rng)];
      const RelMor& b = ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng)];
      for (auto d : kDegens)
        comp.record(degen(d, fm::compose(b, a)) == compose(degen(d, b), degen(d, a)), [&] {
          return nlohmann::json{{"degeneracy", to_string(d)}, {"m", fm::to_json(a)}, {"n", fm::to_json(b)}};
        });
    }
    comp.skipped = skipped;
    ids.emit(r);
    comp.emit(r);
  }

  // the four composites with Eq are naturally isomorphic through identity corner maps
  {
    Report::Timer timer(r);
    Tally iso{"cube.composites.iso", "cube.composites"}, nat{"cube.composites.natural", "cube.composites"},
        corners{"cube.composites.corners", "cube.composites"};
    auto between = [](Degen d1, Degen d2, const FinSet& a) -> std::optional<TwoRelMor> {
      TwoRel x = degen(d1, fm::eq(a)), y = degen(d2, fm::eq(a));
      std::array<RelMor, 4> e;
      for (int i = 0; i < 4; ++i) {
        if (!(x.edge(static_cast<Face2>(i)) == y.edge(static_cast<Face2>(i)))) return std::nullopt;
        e[i] = RelMor::identity(x.edge(static_cast<Face2>(i)));
      }
      auto t = try_make(x, y, e);
      if (!t || !t->is_iso()) return std::nullopt;
      return t;
    };
    for (auto d1 : kDegens)
      for (auto d2 : kDegens) {
        if (d1 == d2) continue;
        for (int n = 1; n <= opt.bound; ++n) {
          FinSet a = FinSet::atoms(n);
          auto cx = [&] { return nlohmann::json{{"from", to_string(d1)}, {"to", to_string(d2)}, {"carrier", n}}; };
          auto t = between(d1, d2, a);
          iso.record(t.has_value(), cx);
          if (!t) continue;
          bool id_corners = true;
          for (int i = 0; i < 4; ++i) id_corners = id_corners && t->corner(i).is_identity();
          corners.record(id_corners, cx);
          for (int k = 1; k <= opt.bound; ++k) {
            FinSet b = FinSet::atoms(k);
            auto tb = between(d1, d2, b);
            if (!tb) continue;
            for (const auto& f : fm::all_functions(a, b)) {
              RelMor ef = fm::eq(f);
              nat.record(compose(*tb, degen(d1, ef)) == compose(degen(d2, ef), *t), [&] {
                return nlohmann::json{{"from", to_string(d1)}, {"to", to_string(d2)}, {"function", fm::to_json(f)}};
              });
            }
          }
        }
      }
    iso.emit(r);
    corners.emit(r);
    nat.emit(r);
  }

  // quantifier-free functors commute with the level-2 faces and preserve degeneracies up to iso
  {
    Report::Timer timer(r);
    Tally faces{"cube.eval2.faces", "cube.functor_faces"}, eps{"cube.eps2.iso", "cube.eps2"};
    std::size_t skipped = 0;
    auto squares = probe_squares(u);
    for (const auto& f : pool) {
      if (fib::has_forall(f) || f->arity > 2) continue;
      try {
        auto envs = fib::probe_envs(u, f->arity, 9);
        for (const auto& env : envs.level1)
          for (auto d : kDegens) {
            auto e = epsilon2(m, f, d, env);
            eps.record(e && e->is_iso(), [&] {
              return nlohmann::json{{"functor", f->key}, {"degeneracy", to_string(d)}, {"env", env.size()}};
            });
          }
        // square environments built from the probe squares, capped
        std::vector<std::vector<TwoRel>> senvs{{}};
        for (int i = 0; i < f->arity; ++i) {
          std::vector<std::vector<TwoRel>> next;
          for (const auto& e : senvs)
            for (const auto& q : squares) {
              if (next.size() >= 16) break;
              auto e2 = e;
              e2.push_back(q);
              next.push_back(std::move(e2));
            }
          senvs = std::move(next);
        }
        for (const auto& env : senvs) {
          TwoRel v = eval2(f, env);
          bool ok = true;
          for (auto face : kFaces2) {
            std::vector<Rel> edges;
            for (const auto& q : env) edges.push_back(q.edge(face));
            ok = ok && v.edge(face) == m.eval1(f, edges);
          }
          faces.record(ok, [&] { return nlohmann::json{{"functor", f->key}}; });
        }
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    faces.skipped = eps.skipped = skipped;
    faces.emit(r);
    eps.emit(r);
  }

  // level-2 components of natural transformations are forced
  {
    Report::Timer timer(r);
    Tally unique{"cube.eta2.unique", "cube.eta2"}, faces{"cube.eta2.faces", "cube.eta2"};
    auto envs = fib::probe_envs(u, 1);
    for (const auto& eta : small_nats()) {
      for (const auto& env : envs.level1) {
        auto cx = [&] { return nlohmann::json{{"nat", eta.name}, {"env", rel_json(env[0])}}; };
        auto es = epsilon2(m, eta.src, Degen::EqH, env), et = epsilon2(m, eta.tgt, Degen::EqH, env);
        if (!es || !et) {
          faces.record(false, cx);
          continue;
        }
        Eta2Input in{eta.at1(m, env), eta.at1(m, fib::eq_env(fib::dom_env(env))),
                     eta.at1(m, fib::eq_env(fib::cod_env(env))), *es, *et};
        auto res = eta2_extension(in, true);
        faces.record(res.eta2 && res.faces_ok, [&] {
          auto j = cx();
          j["problem"] = res.problem;
          return j;
        });
        unique.record(res.solutions == 1, [&] {
          auto j = cx();
          j["solutions"] = res.solutions;
          return j;
        });
      }
    }
    faces.emit(r);
    unique.emit(r);
  }

  // essential surjectivity on closed functors
  {
    Report::Timer timer(r);
    Tally ess{"cube.essential_surjectivity", "cube.comparison"};
    std::size_t skipped = 0;
    for (const auto& f : pool) {
      if (f->arity != 0) continue;
      try {
        auto d = essential_surjectivity(m, f);
        ess.record(d.is_null(), [&] { return d; });
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    ess.skipped = skipped;
    ess.emit(r);
  }

  // elements of the one-dimensional quantifier satisfy the 2D membership conditions
  {
    Report::Timer timer(r);
    Tally l0{"cube.forall2.level0", "cube.forall2"}, l1{"cube.forall2.level1", "cube.forall2"},
        l2{"cube.forall2.level2", "cube.forall2"};
    std::size_t skipped = 0;
    for (const auto& g : pool) {
      if (g->arity < 1 || g->arity > 2 || fib::has_forall(g)) continue;
      try {
        Forall2 q(m, g);
        TF all = fib::forall_f(g);
        const int n = g->arity - 1;
        auto envs = fib::probe_envs(u, n, 3);
        for (const auto& env : envs.level0) {
          FinSet xs = m.eval0(all, env);
          for (std::size_t i = 0; i < std::min<std::size_t>(xs.size(), 4); ++i) {
            Element x = q.element(env, xs.at(i));
            auto res = q.level0(env, x);
            l0.record(res.ok, [&] { return nlohmann::json{{"body", g->key}, {"element", xs.at(i).str()}, {"violation", res.violation}}; });
            // the all-reflexive square over the degenerate environment
            auto eqs = fib::eq_env(env);
            std::vector<TwoRel> flat;
            for (const auto& e : eqs) flat.push_back(eq_h(e));
            auto phi = q.relate(eqs, x, x);
            auto res2 = q.level2(flat, {x, x, x, x}, {phi, phi, phi, phi});
            l2.record(res2.ok, [&] { return nlohmann::json{{"body", g->key}, {"element", xs.at(i).str()}, {"violation", res2.violation}}; });
          }
        }
        for (const auto& env : envs.level1) {
          auto de = fib::dom_env(env), ce = fib::cod_env(env);
          FinSet xs = m.eval0(all, de), ys = m.eval0(all, ce);
          std::size_t tried = 0;
          for (const auto& a : xs.elements())
            for (const auto& b : ys.elements()) {
              if (tried >= 4 || !m.relates(all, env, a, b)) continue;
              ++tried;
              Element x = q.element(de, a), y = q.element(ce, b);
              auto phi = q.relate(env, x, y);
              auto res = q.level1(env, x, y, phi);
              l1.record(res.ok, [&] {
                return nlohmann::json{{"body", g->key}, {"x", a.str()}, {"y", b.str()}, {"violation", res.violation}};
              });
            }
        }
      } catch (const SizeExceeded&) {
        ++skipped;
      }
    }
    for (auto* t : {&l0, &l1, &l2}) {
      t->skipped = skipped;
      t->emit(r);
    }
  }
  return r;
}

}  // namespace pwb::cube
