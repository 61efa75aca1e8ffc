#include <algorithm>
#include <cmath>
#include <tuple>
#include <numeric>

#include "pwb/error.hpp"
#include "pwb/finmodel.hpp"

namespace pwb::fm {

namespace {
Limits g_limits;
}

const Limits& limits() { return g_limits; }
void set_limits(const Limits& l) { g_limits = l; }

// ---- FinSet

FinSet::FinSet() {
  static const auto empty = std::make_shared<const std::vector<Label>>();
  elems_ = empty;
}

FinSet FinSet::of(std::vector<Label> elems) {
  if (elems.size() > limits().max_set)
    throw SizeExceeded("set of " + std::to_string(elems.size()) + " elements exceeds the size limit");
  if (!std::is_sorted(elems.begin(), elems.end())) std::sort(elems.begin(), elems.end());
  for (std::size_t i = 1; i < elems.size(); ++i)
    if (elems[i - 1] == elems[i]) throw ModelError("duplicate element " + elems[i].str() + " in finite set");
  FinSet s;
  s.elems_ = std::make_shared<const std::vector<Label>>(std::move(elems));
  return s;
}

FinSet FinSet::atoms(int n) {
  std::vector<Label> xs;
  for (int i = 0; i < n; ++i) xs.push_back(Label::atom(i));
  return of(std::move(xs));
}

std::optional<std::size_t> FinSet::index_of(const Label& x) const {
  auto it = std::lower_bound(elems_->begin(), elems_->end(), x);
  if (it == elems_->end() || !(*it == x)) return std::nullopt;
  return static_cast<std::size_t>(it - elems_->begin());
}

std::size_t FinSet::index(const Label& x) const {
  auto i = index_of(x);
  if (!i) throw ModelError(x.str() + " is not an element of " + str());
  return *i;
}

std::string FinSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ',';
    s += at(i).str();
  }
  return s + "}";
}

bool operator==(const FinSet& a, const FinSet& b) {
  if (a.elems_ == b.elems_) return true;
  return *a.elems_ == *b.elems_;
}

std::strong_ordering operator<=>(const FinSet& a, const FinSet& b) {
  if (a.elems_ == b.elems_) return std::strong_ordering::equal;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (auto c = a.at(i) <=> b.at(i); c != 0) return c;
  return std::strong_ordering::equal;
}

// ---- FinFn

FinFn FinFn::from_indices(FinSet dom, FinSet cod, std::vector<std::uint32_t> img) {
  if (img.size() != dom.size()) throw ModelError("function table size does not match its domain");
  for (auto i : img)
    if (i >= cod.size()) throw ModelError("function value outside codomain " + cod.str());
  FinFn f;
  f.dom_ = std::move(dom);
  f.cod_ = std::move(cod);
  f.img_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(img));
  return f;
}

FinFn FinFn::from_labels(FinSet dom, FinSet cod, const std::vector<Label>& values) {
  std::vector<std::uint32_t> img;
  img.reserve(values.size());
  for (const auto& v : values) {
    auto i = cod.index_of(v);
    if (!i) throw ModelError("function value " + v.str() + " outside codomain " + cod.str());
    img.push_back(static_cast<std::uint32_t>(*i));
  }
  return from_indices(std::move(dom), std::move(cod), std::move(img));
}

FinFn FinFn::from_table(FinSet dom, FinSet cod, const Label& table) {
  std::vector<Label> values;
  for (const auto& x : dom.elements()) values.push_back(table.lookup(x));
  return from_labels(std::move(dom), std::move(cod), values);
}

FinFn FinFn::build(FinSet dom, FinSet cod, const std::function<Label(const Label&)>& f) {
  std::vector<Label> values;
  values.reserve(dom.size());
  for (const auto& x : dom.elements()) values.push_back(f(x));
  return from_labels(std::move(dom), std::move(cod), values);
}

FinFn FinFn::identity(const FinSet& a) {
  std::vector<std::uint32_t> img(a.size());
  std::iota(img.begin(), img.end(), 0u);
  return from_indices(a, a, std::move(img));
}

const Label& FinFn::operator()(const Label& x) const { return cod_.at((*img_)[dom_.index(x)]); }

bool FinFn::is_identity() const {
  if (!(dom_ == cod_)) return false;
  for (std::size_t i = 0; i < img_->size(); ++i)
    if ((*img_)[i] != i) return false;
  return true;
}

bool FinFn::is_bijection() const {
  if (dom_.size() != cod_.size()) return false;
  std::vector<bool> hit(cod_.size(), false);
  for (auto i : *img_) {
    if (hit[i]) return false;
    hit[i] = true;
  }
  return true;
}

FinFn FinFn::inverse() const {
  if (!is_bijection()) throw ModelError("inverse of a non-bijective function");
  std::vector<std::uint32_t> inv(img_->size());
  for (std::size_t i = 0; i < img_->size(); ++i) inv[(*img_)[i]] = static_cast<std::uint32_t>(i);
  return from_indices(cod_, dom_, std::move(inv));
}

Label FinFn::as_label() const {
  std::vector<Label> kv;
  kv.reserve(2 * dom_.size());
  for (std::size_t i = 0; i < dom_.size(); ++i) {
    kv.push_back(dom_.at(i));
    kv.push_back(cod_.at((*img_)[i]));
  }
  return Label::table(std::move(kv));
}

bool operator==(const FinFn& a, const FinFn& b) {
  return a.dom_ == b.dom_ && a.cod_ == b.cod_ && (a.img_ == b.img_ || *a.img_ == *b.img_);
}

FinFn compose(const FinFn& g, const FinFn& f) {
  if (!(f.cod() == g.dom())) throw ModelError("composition of non-composable functions");
  std::vector<std::uint32_t> img(f.dom().size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = g.image_index(f.image_index(i));
  return FinFn::from_indices(f.dom(), g.cod(), std::move(img));
}

// ---- Rel

Rel::Rel() {
  static const auto empty = [] {
    auto d = std::make_shared<Data>();
    d->offset.push_back(0);
    return std::shared_ptr<const Data>(d);
  }();
  d_ = empty;
}

Rel Rel::from_entries(FinSet dom, FinSet cod, std::vector<Entry> entries) {
  for (auto& e : entries) {
    if (e.a >= dom.size() || e.b >= cod.size()) throw ModelError("relation entry outside its endpoints");
    std::sort(e.ws.begin(), e.ws.end());
    e.ws.erase(std::unique(e.ws.begin(), e.ws.end()), e.ws.end());
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  std::vector<Entry> merged;
  for (auto& e : entries) {
    if (e.ws.empty()) continue;
    if (!merged.empty() && merged.back().a == e.a && merged.back().b == e.b) {
      auto& ws = merged.back().ws;
      ws.insert(ws.end(), e.ws.begin(), e.ws.end());
      std::sort(ws.begin(), ws.end());
      ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    } else {
      merged.push_back(std::move(e));
    }
  }
  auto d = std::make_shared<Data>();
  d->dom = std::move(dom);
  d->cod = std::move(cod);
  d->offset.reserve(merged.size() + 1);
  std::size_t total = 0;
  for (const auto& e : merged) {
    d->offset.push_back(total);
    total += e.ws.size();
  }
  d->offset.push_back(total);
  if (total > limits().max_witnesses)
    throw SizeExceeded("relation with " + std::to_string(total) + " witnesses exceeds the size limit");
  d->entries = std::move(merged);
  return Rel(std::move(d));
}

Rel Rel::make(FinSet dom, FinSet cod, std::vector<Witness> triples) {
  std::vector<Entry> entries;
  entries.reserve(triples.size());
  for (auto& t : triples) {
    auto a = dom.index_of(t.a);
    auto b = cod.index_of(t.b);
    if (!a || !b) throw ModelError("relation pair (" + t.a.str() + "," + t.b.str() + ") outside its endpoints");
    entries.push_back({static_cast<std::uint32_t>(*a), static_cast<std::uint32_t>(*b), {std::move(t.w)}});
  }
  return from_entries(std::move(dom), std::move(cod), std::move(entries));
}

Rel Rel::from_pairs(FinSet dom, FinSet cod, const std::vector<std::pair<Label, Label>>& pairs, const Label& w) {
  std::vector<Witness> ts;
  for (const auto& [a, b] : pairs) ts.push_back({a, b, w});
  return make(std::move(dom), std::move(cod), std::move(ts));
}

std::optional<std::size_t> Rel::entry_of(std::uint32_t a, std::uint32_t b) const {
  const auto& es = d_->entries;
  auto it = std::lower_bound(es.begin(), es.end(), std::make_pair(a, b), [](const Entry& e, const auto& key) {
    return std::tie(e.a, e.b) < std::tie(key.first, key.second);
  });
  if (it == es.end() || it->a != a || it->b != b) return std::nullopt;
  return static_cast<std::size_t>(it - es.begin());
}

std::span<const Label> Rel::witnesses(std::uint32_t a, std::uint32_t b) const {
  auto e = entry_of(a, b);
  if (!e) return {};
  return d_->entries[*e].ws;
}

std::span<const Label> Rel::witnesses(const Label& a, const Label& b) const {
  auto ia = dom().index_of(a);
  auto ib = cod().index_of(b);
  if (!ia || !ib) return {};
  return witnesses(static_cast<std::uint32_t>(*ia), static_cast<std::uint32_t>(*ib));
}

std::optional<std::size_t> Rel::flat_index(std::uint32_t a, std::uint32_t b, const Label& w) const {
  auto e = entry_of(a, b);
  if (!e) return std::nullopt;
  const auto& ws = d_->entries[*e].ws;
  auto it = std::lower_bound(ws.begin(), ws.end(), w);
  if (it == ws.end() || !(*it == w)) return std::nullopt;
  return d_->offset[*e] + static_cast<std::size_t>(it - ws.begin());
}

std::size_t Rel::entry_of_flat(std::size_t flat) const {
  if (flat >= witness_count()) throw ModelError("witness index out of range");
  auto it = std::upper_bound(d_->offset.begin(), d_->offset.end(), flat);
  return static_cast<std::size_t>(it - d_->offset.begin()) - 1;
}

const Label& Rel::witness_label(std::size_t flat) const {
  std::size_t e = entry_of_flat(flat);
  return d_->entries[e].ws[flat - d_->offset[e]];
}

Witness Rel::witness_at(std::size_t flat) const {
  std::size_t e = entry_of_flat(flat);
  const auto& en = d_->entries[e];
  return {dom().at(en.a), cod().at(en.b), en.ws[flat - d_->offset[e]]};
}

bool Rel::is_propositional() const {
  return std::all_of(d_->entries.begin(), d_->entries.end(), [](const Entry& e) { return e.ws.size() == 1; });
}

std::string Rel::str() const {
  std::string s = dom().str() + "<->" + cod().str() + "[";
  bool first = true;
  for (const auto& e : d_->entries)
    for (const auto& w : e.ws) {
      if (!first) s += ',';
      first = false;
      s += "(" + dom().at(e.a).str() + "," + cod().at(e.b).str() + "," + w.str() + ")";
    }
  return s + "]";
}

bool operator==(const Rel& x, const Rel& y) {
  if (x.d_ == y.d_) return true;
  if (!(x.dom() == y.dom()) || !(x.cod() == y.cod())) return false;
  const auto& a = x.d_->entries;
  const auto& b = y.d_->entries;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].a != b[i].a || a[i].b != b[i].b || a[i].ws != b[i].ws) return false;
  return true;
}

std::strong_ordering operator<=>(const Rel& x, const Rel& y) {
  if (x.d_ == y.d_) return std::strong_ordering::equal;
  if (auto c = x.dom() <=> y.dom(); c != 0) return c;
  if (auto c = x.cod() <=> y.cod(); c != 0) return c;
  const auto& a = x.d_->entries;
  const auto& b = y.d_->entries;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = std::tie(a[i].a, a[i].b) <=> std::tie(b[i].a, b[i].b); c != 0) return c;
    if (auto c = std::lexicographical_compare_three_way(a[i].ws.begin(), a[i].ws.end(), b[i].ws.begin(),
                                                        b[i].ws.end());
        c != 0)
      return c;
  }
  return a.size() <=> b.size();
}

// ---- RelMor

static void check_faces(const Rel& src, const Rel& tgt, const FinFn& f, const FinFn& g) {
  if (!(f.dom() == src.dom()) || !(f.cod() == tgt.dom()))
    throw ModelError("relation morphism: domain-side map does not match the endpoints");
  if (!(g.dom() == src.cod()) || !(g.cod() == tgt.cod()))
    throw ModelError("relation morphism: codomain-side map does not match the endpoints");
}

RelMor RelMor::build(Rel src, Rel tgt, FinFn f, FinFn g, const std::function<Label(const Witness&)>& act) {
  check_faces(src, tgt, f, g);
  std::vector<std::uint32_t> action;
  action.reserve(src.witness_count());
  for (const auto& e : src.entries()) {
    auto fa = f.image_index(e.a);
    auto gb = g.image_index(e.b);
    for (const auto& w : e.ws) {
      Label v = act({src.dom().at(e.a), src.cod().at(e.b), w});
      auto k = tgt.flat_index(fa, gb, v);
      if (!k)
        throw ModelError("relation morphism sends (" + src.dom().at(e.a).str() + "," + src.cod().at(e.b).str() +
                         "," + w.str() + ") to " + v.str() + ", which is not a witness at (" +
                         tgt.dom().at(fa).str() + "," + tgt.cod().at(gb).str() + ")");
      action.push_back(static_cast<std::uint32_t>(*k));
    }
  }
  RelMor m;
  m.src_ = std::move(src);
  m.tgt_ = std::move(tgt);
  m.f_ = std::move(f);
  m.g_ = std::move(g);
  m.action_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(action));
  return m;
}

RelMor RelMor::make(Rel src, Rel tgt, FinFn f, FinFn g, const std::vector<Label>& action) {
  if (action.size() != src.witness_count()) throw ModelError("relation morphism action has the wrong size");
  std::size_t k = 0;
  return build(std::move(src), std::move(tgt), std::move(f), std::move(g),
               [&](const Witness&) { return action[k++]; });
}

RelMor RelMor::forced(Rel src, Rel tgt, FinFn f, FinFn g) {
  check_faces(src, tgt, f, g);
  std::vector<std::uint32_t> action;
  action.reserve(src.witness_count());
  for (const auto& e : src.entries()) {
    auto fa = f.image_index(e.a);
    auto gb = g.image_index(e.b);
    auto te = tgt.entry_of(fa, gb);
    if (!te)
      throw ModelError("no target witness at (" + tgt.dom().at(fa).str() + "," + tgt.cod().at(gb).str() + ")");
    if (tgt.entries()[*te].ws.size() != 1) throw ModelError("target fibre is not a singleton");
    for (std::size_t i = 0; i < e.ws.size(); ++i) action.push_back(static_cast<std::uint32_t>(tgt.entry_offset(*te)));
  }
  RelMor m;
  m.src_ = std::move(src);
  m.tgt_ = std::move(tgt);
  m.f_ = std::move(f);
  m.g_ = std::move(g);
  m.action_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(action));
  return m;
}

RelMor RelMor::identity(const Rel& r) {
  RelMor m;
  m.src_ = r;
  m.tgt_ = r;
  m.f_ = FinFn::identity(r.dom());
  m.g_ = FinFn::identity(r.cod());
  std::vector<std::uint32_t> action(r.witness_count());
  std::iota(action.begin(), action.end(), 0u);
  m.action_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(action));
  return m;
}

const Label& RelMor::act(std::size_t flat) const { return tgt_.witness_label((*action_)[flat]); }

const Label& RelMor::act(const Label& a, const Label& b, const Label& w) const {
  auto k = src_.flat_index(static_cast<std::uint32_t>(src_.dom().index(a)),
                           static_cast<std::uint32_t>(src_.cod().index(b)), w);
  if (!k) throw ModelError("(" + a.str() + "," + b.str() + "," + w.str() + ") is not a source witness");
  return act(*k);
}

Witness RelMor::apply(const Witness& x) const { return {f_(x.a), g_(x.b), act(x.a, x.b, x.w)}; }

bool RelMor::is_identity() const {
  if (!(src_ == tgt_) || !has_identity_faces()) return false;
  for (std::size_t i = 0; i < action_->size(); ++i)
    if ((*action_)[i] != i) return false;
  return true;
}

bool RelMor::is_iso() const {
  if (!f_.is_bijection() || !g_.is_bijection()) return false;
  if (src_.witness_count() != tgt_.witness_count()) return false;
  std::vector<bool> hit(tgt_.witness_count(), false);
  for (auto k : *action_) {
    if (hit[k]) return false;
    hit[k] = true;
  }
  return true;
}

RelMor RelMor::inverse() const {
  if (!is_iso()) throw ModelError("inverse of a non-invertible relation morphism");
  RelMor m;
  m.src_ = tgt_;
  m.tgt_ = src_;
  m.f_ = f_.inverse();
  m.g_ = g_.inverse();
  std::vector<std::uint32_t> inv(action_->size());
  for (std::size_t k = 0; k < action_->size(); ++k) inv[(*action_)[k]] = static_cast<std::uint32_t>(k);
  m.action_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(inv));
  return m;
}

bool operator==(const RelMor& a, const RelMor& b) {
  return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.f_ == b.f_ && a.g_ == b.g_ &&
         (a.action_ == b.action_ || *a.action_ == *b.action_);
}

RelMor compose(const RelMor& n, const RelMor& m) {
  if (!(m.tgt() == n.src())) throw ModelError("composition of non-composable relation morphisms");
  std::vector<Label> action;
  action.reserve(m.src().witness_count());
  for (std::size_t k = 0; k < m.src().witness_count(); ++k) action.push_back(n.act(m.act_index(k)));
  return RelMor::make(m.src(), n.tgt(), compose(n.f(), m.f()), compose(n.g(), m.g()), action);
}

// ---- equality relations

Rel eq(const FinSet& a) {
  std::vector<Rel::Entry> es;
  es.reserve(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) es.push_back({i, i, {Label::refl(a.at(i))}});
  return Rel::from_entries(a, a, std::move(es));
}

RelMor eq(const FinFn& f) {
  return RelMor::build(eq(f.dom()), eq(f.cod()), f, f, [&](const Witness& x) { return Label::refl(f(x.a)); });
}

// ---- policies

const char* to_string(Policy p) {
  switch (p) {
    case Policy::Strict: return "strict";
    case Policy::Rey: return "rey";
    case Policy::Crey: return "crey";
  }
  return "?";
}

Policy parse_policy(std::string_view s) {
  if (s == "strict") return Policy::Strict;
  if (s == "rey") return Policy::Rey;
  if (s == "crey") return Policy::Crey;
  throw Error("unknown policy '" + std::string(s) + "' (expected strict, rey or crey)");
}

bool relevant(Policy p, const FinFn& f) {
  switch (p) {
    case Policy::Strict:
    case Policy::Rey: return f.is_identity();
    case Policy::Crey: return f.is_bijection();
  }
  return false;
}

bool relevant(Policy p, const RelMor& m) {
  switch (p) {
    case Policy::Strict: return m.src() == m.tgt() && m == RelMor::identity(m.src());
    case Policy::Rey: return m.is_iso() && m.has_identity_faces();
    case Policy::Crey: return m.is_iso();
  }
  return false;
}

// ---- enumeration

std::vector<FinFn> all_functions(const FinSet& a, const FinSet& b) {
  std::vector<FinFn> out;
  if (a.empty()) {
    out.push_back(FinFn::from_indices(a, b, {}));
    return out;
  }
  if (b.empty()) return out;
  double total = std::pow(static_cast<double>(b.size()), static_cast<double>(a.size()));
  if (total > static_cast<double>(limits().max_set)) throw SizeExceeded("too many functions to enumerate");
  std::vector<std::uint32_t> idx(a.size(), 0);
  for (;;) {
    out.push_back(FinFn::from_indices(a, b, idx));
    std::size_t k = idx.size();
    while (k > 0) {
      --k;
      if (++idx[k] < b.size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

std::vector<FinFn> all_bijections(const FinSet& a, const FinSet& b) {
  std::vector<FinFn> out;
  if (a.size() != b.size()) return out;
  std::vector<std::uint32_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), 0u);
  do out.push_back(FinFn::from_indices(a, b, idx));
  while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

std::vector<Rel> all_prop_relations(const FinSet& a, const FinSet& b) {
  std::size_t cells = a.size() * b.size();
  if (cells > 16) throw SizeExceeded("too many relations to enumerate");
  std::vector<Rel> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cells); ++mask) {
    std::vector<Rel::Entry> es;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask & (std::size_t{1} << c))
        es.push_back({static_cast<std::uint32_t>(c / b.size()), static_cast<std::uint32_t>(c % b.size()),
                      {Label::sym("w")}});
    out.push_back(Rel::from_entries(a, b, std::move(es)));
  }
  return out;
}

std::vector<RelMor> all_rel_morphisms(const Rel& r, const Rel& s, std::size_t cap) {
  std::vector<RelMor> out;
  for (const auto& f : all_functions(r.dom(), s.dom()))
    for (const auto& g : all_functions(r.cod(), s.cod())) {
      std::vector<std::span<const Label>> choices;
      bool ok = true;
      for (const auto& e : r.entries()) {
        auto ws = s.witnesses(f.image_index(e.a), g.image_index(e.b));
        if (ws.empty()) {
          ok = false;
          break;
        }
        for (std::size_t i = 0; i < e.ws.size(); ++i) choices.push_back(ws);
      }
      if (!ok) continue;
      std::vector<std::size_t> pick(choices.size(), 0);
      for (;;) {
        std::vector<Label> action;
        action.reserve(choices.size());
        for (std::size_t i = 0; i < choices.size(); ++i) action.push_back(choices[i][pick[i]]);
        out.push_back(RelMor::make(r, s, f, g, action));
        if (out.size() > cap) throw SizeExceeded("too many relation morphisms to enumerate");
        std::size_t k = pick.size();
        bool done = true;
        while (k > 0) {
          --k;
          if (++pick[k] < choices[k].size()) {
            done = false;
            break;
          }
          pick[k] = 0;
        }
        if (done) break;
      }
    }
  return out;
}

std::vector<RelMor> all_rel_isos(const Rel& r, const Rel& s) {
  std::vector<RelMor> out;
  if (r.dom().size() != s.dom().size() || r.cod().size() != s.cod().size() ||
      r.witness_count() != s.witness_count())
    return out;
  for (auto& m : all_rel_morphisms(r, s))
    if (m.is_iso()) out.push_back(std::move(m));
  return out;
}

// ---- json

nlohmann::json to_json(const FinSet& a) {
  auto j = nlohmann::json::array();
  for (const auto& x : a.elements()) j.push_back(x.str());
  return j;
}

nlohmann::json to_json(const FinFn& f) {
  nlohmann::json j;
  j["dom"] = to_json(f.dom());
  j["cod"] = to_json(f.cod());
  auto t = nlohmann::json::array();
  for (std::size_t i = 0; i < f.dom().size(); ++i) t.push_back(f.cod().at(f.image_index(i)).str());
  j["table"] = t;
  return j;
}

nlohmann::json to_json(const Rel& r) {
  nlohmann::json j;
  j["dom"] = to_json(r.dom());
  j["cod"] = to_json(r.cod());
  auto ws = nlohmann::json::array();
  for (const auto& e : r.entries())
    for (const auto& w : e.ws) ws.push_back({r.dom().at(e.a).str(), r.cod().at(e.b).str(), w.str()});
  j["witnesses"] = ws;
  return j;
}

nlohmann::json to_json(const RelMor& m) {
  nlohmann::json j;
  j["src"] = to_json(m.src());
  j["tgt"] = to_json(m.tgt());
  j["f"] = to_json(m.f());
  j["g"] = to_json(m.g());
  auto act = nlohmann::json::array();
  for (std::size_t k = 0; k < m.src().witness_count(); ++k) {
    auto w = m.src().witness_at(k);
    act.push_back({w.a.str(), w.b.str(), w.w.str(), m.act(k).str()});
  }
  j["action"] = act;
  return j;
}

FinSet finset_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return FinSet::atoms(j.get<int>());
  if (!j.is_array()) throw ModelError("a set is a list of labels or a size");
  std::vector<Label> xs;
  for (const auto& x : j) xs.push_back(x.is_number_integer() ? Label::atom(x.get<int>()) : Label::parse(x.get<std::string>()));
  return FinSet::of(std::move(xs));
}

static Label label_from_json(const nlohmann::json& x) {
  return x.is_number_integer() ? Label::atom(x.get<int>()) : Label::parse(x.get<std::string>());
}

Rel rel_from_json(const nlohmann::json& j) {
  FinSet dom = finset_from_json(j.at("dom"));
  FinSet cod = finset_from_json(j.at("cod"));
  std::vector<Witness> ts;
  if (j.contains("witnesses"))
    for (const auto& t : j.at("witnesses")) ts.push_back({label_from_json(t.at(0)), label_from_json(t.at(1)), label_from_json(t.at(2))});
  if (j.contains("pairs"))
    for (const auto& t : j.at("pairs"))
      ts.push_back({label_from_json(t.at(0)), label_from_json(t.at(1)), t.size() > 2 ? label_from_json(t.at(2)) : Label::sym("w")});
  return Rel::make(std::move(dom), std::move(cod), std::move(ts));
}

}  // namespace pwb::fm
