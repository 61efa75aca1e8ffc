#include <algorithm>

#include "pwb/error.hpp"
#include "pwb/tworel.hpp"

namespace pwb::cube {

const char* to_string(Face2 f) {
  switch (f) {
    case Face2::ZeroTop: return "0top";
    case Face2::OneTop: return "1top";
    case Face2::ZeroBot: return "0bot";
    case Face2::OneBot: return "1bot";
  }
  return "?";
}

namespace {

int fi(Face2 f) { return static_cast<int>(f); }

// Corner indices of the two ends of each edge.
constexpr int kEnds[4][2] = {{0, 1}, {0, 2}, {2, 3}, {1, 3}};

void check_boundary(const std::array<Rel, 4>& e) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) {
          if (kEnds[i][s] != kEnds[j][t]) continue;
          const FinSet& x = s == 0 ? e[i].dom() : e[i].cod();
          const FinSet& y = t == 0 ? e[j].dom() : e[j].cod();
          if (!(x == y)) throw ModelError("2-relation edges do not share their corners");
        }
}

}  // namespace

TwoRel TwoRel::make(Rel q0t, Rel q1t, Rel q0b, Rel q1b, std::vector<Cell> cells) {
  TwoRel q;
  q.edges_ = {std::move(q0t), std::move(q1t), std::move(q0b), std::move(q1b)};
  check_boundary(q.edges_);
  for (const auto& c : cells)
    for (int i = 0; i < 4; ++i) {
      const Label& x = c.corner[kEnds[i][0]];
      const Label& y = c.corner[kEnds[i][1]];
      auto ws = q.edges_[i].witnesses(x, y);
      if (!std::binary_search(ws.begin(), ws.end(), c.witness[i]))
        throw ModelError("2-relation cell has an ill-typed witness on edge " + std::string(to_string(static_cast<Face2>(i))));
    }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  q.cells_ = std::move(cells);
  return q;
}

const Rel& TwoRel::edge(Face2 f) const { return edges_[fi(f)]; }

const FinSet& TwoRel::corner(int i) const {
  switch (i) {
    case 0: return edges_[0].dom();
    case 1: return edges_[0].cod();
    case 2: return edges_[1].cod();
    default: return edges_[2].cod();
  }
}

bool TwoRel::holds(const Cell& c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

std::string TwoRel::str() const {
  std::string s = "[";
  for (int i = 0; i < 4; ++i) s += (i ? " | " : "") + edges_[i].str();
  s += " ; " + std::to_string(cells_.size()) + " cells]";
  return s;
}

bool operator==(const TwoRel& x, const TwoRel& y) { return x.edges_ == y.edges_ && x.cells_ == y.cells_; }

// ---- degeneracies and connections

TwoRel eq_h(const Rel& r) {
  std::vector<Cell> cs;
  for (std::size_t k = 0; k < r.witness_count(); ++k) {
    auto w = r.witness_at(k);
    cs.push_back({{w.a, w.b, w.a, w.b}, {w.w, Label::refl(w.a), w.w, Label::refl(w.b)}});
  }
  return TwoRel::make(r, fm::eq(r.dom()), r, fm::eq(r.cod()), std::move(cs));
}

TwoRel eq_v(const Rel& r) {
  std::vector<Cell> cs;
  for (std::size_t k = 0; k < r.witness_count(); ++k) {
    auto w = r.witness_at(k);
    cs.push_back({{w.a, w.a, w.b, w.b}, {Label::refl(w.a), w.w, Label::refl(w.b), w.w}});
  }
  return TwoRel::make(fm::eq(r.dom()), r, fm::eq(r.cod()), r, std::move(cs));
}

TwoRel conn_top(const Rel& r) {
  std::vector<Cell> cs;
  for (std::size_t k = 0; k < r.witness_count(); ++k) {
    auto w = r.witness_at(k);
    cs.push_back({{w.a, w.b, w.b, w.b}, {w.w, w.w, Label::refl(w.b), Label::refl(w.b)}});
  }
  return TwoRel::make(r, r, fm::eq(r.cod()), fm::eq(r.cod()), std::move(cs));
}

TwoRel conn_bot(const Rel& r) {
  std::vector<Cell> cs;
  for (std::size_t k = 0; k < r.witness_count(); ++k) {
    auto w = r.witness_at(k);
    cs.push_back({{w.a, w.a, w.a, w.b}, {Label::refl(w.a), Label::refl(w.a), w.w, w.w}});
  }
  return TwoRel::make(fm::eq(r.dom()), fm::eq(r.dom()), r, r, std::move(cs));
}

TwoRel transpose(const TwoRel& q) {
  std::vector<Cell> cs;
  for (const auto& c : q.cells())
    cs.push_back({{c.corner[0], c.corner[2], c.corner[1], c.corner[3]},
                  {c.witness[1], c.witness[0], c.witness[3], c.witness[2]}});
  return TwoRel::make(q.edge(Face2::OneTop), q.edge(Face2::ZeroTop), q.edge(Face2::OneBot), q.edge(Face2::ZeroBot),
                      std::move(cs));
}

// ---- morphisms

const FinFn& TwoRelMor::corner(int i) const {
  switch (i) {
    case 0: return edges_[0].f();
    case 1: return edges_[0].g();
    case 2: return edges_[1].g();
    default: return edges_[2].g();
  }
}

Cell TwoRelMor::apply(const Cell& c) const {
  Cell out;
  for (int i = 0; i < 4; ++i) {
    auto w = edges_[i].apply({c.corner[kEnds[i][0]], c.corner[kEnds[i][1]], c.witness[i]});
    out.corner[kEnds[i][0]] = w.a;
    out.corner[kEnds[i][1]] = w.b;
    out.witness[i] = w.w;
  }
  return out;
}

namespace {

void check_edges(const TwoRel& src, const TwoRel& tgt, const std::array<RelMor, 4>& e) {
  for (int i = 0; i < 4; ++i)
    if (!(e[i].src() == src.edge(static_cast<Face2>(i))) || !(e[i].tgt() == tgt.edge(static_cast<Face2>(i))))
      throw ModelError("2-relation morphism edge does not match its boundary");
  if (!(e[0].f() == e[1].f()) || !(e[0].g() == e[3].f()) || !(e[1].g() == e[2].f()) || !(e[2].g() == e[3].g()))
    throw ModelError("2-relation morphism edges disagree on a corner map");
}

}  // namespace

std::optional<TwoRelMor> try_make(const TwoRel& src, const TwoRel& tgt, const std::array<RelMor, 4>& edges) {
  check_edges(src, tgt, edges);
  for (const auto& c : src.cells()) {
    Cell out;
    for (int i = 0; i < 4; ++i) {
      auto w = edges[i].apply({c.corner[kEnds[i][0]], c.corner[kEnds[i][1]], c.witness[i]});
      out.corner[kEnds[i][0]] = w.a;
      out.corner[kEnds[i][1]] = w.b;
      out.witness[i] = w.w;
    }
    if (!tgt.holds(out)) return std::nullopt;
  }
  return TwoRelMor::make(src, tgt, edges);
}

TwoRelMor TwoRelMor::make(TwoRel src, TwoRel tgt, std::array<RelMor, 4> edges) {
  check_edges(src, tgt, edges);
  TwoRelMor m;
  m.src_ = std::move(src);
  m.tgt_ = std::move(tgt);
  m.edges_ = std::move(edges);
  for (const auto& c : m.src_.cells())
    if (!m.tgt_.holds(m.apply(c))) throw ModelError("2-relation morphism does not preserve the predicate");
  return m;
}

TwoRelMor TwoRelMor::identity(const TwoRel& q) {
  TwoRelMor m;
  m.src_ = q;
  m.tgt_ = q;
  for (int i = 0; i < 4; ++i) m.edges_[i] = RelMor::identity(q.edge(static_cast<Face2>(i)));
  return m;
}

bool TwoRelMor::is_iso() const {
  for (const auto& e : edges_)
    if (!e.is_iso()) return false;
  if (src_.cells().size() != tgt_.cells().size()) return false;
  std::vector<Cell> img;
  for (const auto& c : src_.cells()) img.push_back(apply(c));
  std::sort(img.begin(), img.end());
  return img == tgt_.cells();
}

bool operator==(const TwoRelMor& x, const TwoRelMor& y) {
  return x.src_ == y.src_ && x.tgt_ == y.tgt_ && x.edges_ == y.edges_;
}

TwoRelMor compose(const TwoRelMor& n, const TwoRelMor& m) {
  if (!(m.tgt() == n.src())) throw ModelError("composition of non-composable 2-relation morphisms");
  std::array<RelMor, 4> e;
  for (int i = 0; i < 4; ++i) e[i] = fm::compose(n.edge(static_cast<Face2>(i)), m.edge(static_cast<Face2>(i)));
  return TwoRelMor::make(m.src(), n.tgt(), e);
}

TwoRelMor eq_h(const RelMor& m) {
  return TwoRelMor::make(eq_h(m.src()), eq_h(m.tgt()), {m, fm::eq(m.f()), m, fm::eq(m.g())});
}

TwoRelMor eq_v(const RelMor& m) {
  return TwoRelMor::make(eq_v(m.src()), eq_v(m.tgt()), {fm::eq(m.f()), m, fm::eq(m.g()), m});
}

TwoRelMor conn_top(const RelMor& m) {
  return TwoRelMor::make(conn_top(m.src()), conn_top(m.tgt()), {m, m, fm::eq(m.g()), fm::eq(m.g())});
}

TwoRelMor conn_bot(const RelMor& m) {
  return TwoRelMor::make(conn_bot(m.src()), conn_bot(m.tgt()), {fm::eq(m.f()), fm::eq(m.f()), m, m});
}

// ---- cartesian structure

TwoRel terminal2() {
  Rel t = fm::terminal_rel();
  Label s = Label::star(), w = Label::tt();
  return TwoRel::make(t, t, t, t, {Cell{{s, s, s, s}, {w, w, w, w}}});
}

TwoRel product(const TwoRel& x, const TwoRel& y) {
  std::vector<Cell> cs;
  for (const auto& c : x.cells())
    for (const auto& d : y.cells()) {
      Cell e;
      for (int i = 0; i < 4; ++i) {
        e.corner[i] = Label::pair(c.corner[i], d.corner[i]);
        e.witness[i] = Label::pair(c.witness[i], d.witness[i]);
      }
      cs.push_back(std::move(e));
    }
  std::array<Rel, 4> e;
  for (int i = 0; i < 4; ++i) e[i] = fm::product(x.edge(static_cast<Face2>(i)), y.edge(static_cast<Face2>(i)));
  return TwoRel::make(e[0], e[1], e[2], e[3], std::move(cs));
}

TwoRel exponential(const TwoRel& x, const TwoRel& y) {
  std::array<Rel, 4> e;
  for (int i = 0; i < 4; ++i) e[i] = fm::exponential(x.edge(static_cast<Face2>(i)), y.edge(static_cast<Face2>(i)));
  // witnesses of each edge grouped by their domain element
  auto by_dom = [](const Rel& r) {
    std::vector<std::vector<std::size_t>> out(r.dom().size());
    for (std::size_t k = 0; k < r.witness_count(); ++k) out[r.entries()[r.entry_of_flat(k)].a].push_back(k);
    return out;
  };
  auto e1 = by_dom(e[1]);
  auto e3 = by_dom(e[3]);
  std::vector<Cell> cs;
  std::size_t inspected = 0;
  for (std::size_t k0 = 0; k0 < e[0].witness_count(); ++k0) {
    auto w0 = e[0].witness_at(k0);
    const auto& ea = e[0].entries()[e[0].entry_of_flat(k0)];
    for (std::size_t k1 : e1[ea.a])
      for (std::size_t k3 : e3[ea.b]) {
        auto w1 = e[1].witness_at(k1);
        auto w3 = e[3].witness_at(k3);
        for (const auto& w2 : e[2].witnesses(w1.b, w3.b)) {
          if (++inspected > fm::limits().max_witnesses) throw SizeExceeded("exponential 2-relation is too large");
          Cell cand{{w0.a, w0.b, w1.b, w3.b}, {w0.w, w1.w, w2, w3.w}};
          bool ok = true;
          for (const auto& c : x.cells()) {
            Cell img;
            for (int i = 0; i < 4; ++i) img.corner[i] = cand.corner[i].lookup(c.corner[i]);
            for (int i = 0; i < 4; ++i)
              img.witness[i] = cand.witness[i].lookup(triple(c.corner[kEnds[i][0]], c.corner[kEnds[i][1]], c.witness[i]));
            if (!y.holds(img)) {
              ok = false;
              break;
            }
          }
          if (ok) cs.push_back(std::move(cand));
        }
      }
  }
  return TwoRel::make(e[0], e[1], e[2], e[3], std::move(cs));
}

// ---- json

nlohmann::json to_json(const TwoRel& q) {
  nlohmann::json j;
  for (auto f : kFaces2) j["edges"][to_string(f)] = fm::to_json(q.edge(f));
  j["cells"] = nlohmann::json::array();
  for (const auto& c : q.cells()) {
    nlohmann::json cj = nlohmann::json::array();
    for (const auto& x : c.corner) cj.push_back(x.str());
    for (const auto& x : c.witness) cj.push_back(x.str());
    j["cells"].push_back(cj);
  }
  return j;
}

TwoRel tworel_from_json(const nlohmann::json& j) {
  std::array<Rel, 4> e;
  for (auto f : kFaces2) e[fi(f)] = fm::rel_from_json(j.at("edges").at(to_string(f)));
  std::vector<Cell> cs;
  for (const auto& cj : j.at("cells")) {
    if (cj.size() != 8) throw ModelError("2-relation cell needs eight labels");
    Cell c;
    for (int i = 0; i < 4; ++i) c.corner[i] = Label::parse(cj[i].get<std::string>());
    for (int i = 0; i < 4; ++i) c.witness[i] = Label::parse(cj[4 + i].get<std::string>());
    cs.push_back(std::move(c));
  }
  return TwoRel::make(e[0], e[1], e[2], e[3], std::move(cs));
}

}  // namespace pwb::cube
