#include <algorithm>
#include <limits>

#include "pwb/error.hpp"
#include "pwb/rgalg.hpp"

namespace pwb::rg {

namespace {
constexpr Id kUnset = std::numeric_limits<Id>::max();
}

// ---- FinCategory

Id FinCategory::add_object(std::string name) {
  Id id = static_cast<Id>(obj_names_.size());
  obj_names_.push_back(name.empty() ? "o" + std::to_string(id) : std::move(name));
  ident_.push_back(kUnset);
  return id;
}

Id FinCategory::add_morphism(Id src, Id tgt, std::string name) {
  Id id = static_cast<Id>(src_.size());
  src_.push_back(src);
  tgt_.push_back(tgt);
  mor_names_.push_back(name.empty() ? "m" + std::to_string(id) : std::move(name));
  return id;
}

void FinCategory::set_identity(Id obj, Id mor) { ident_.at(obj) = mor; }

void FinCategory::finalize_shape() {
  out_.assign(obj_names_.size(), {});
  pos_.assign(src_.size(), 0);
  for (Id m = 0; m < src_.size(); ++m) {
    if (src_[m] >= out_.size()) continue;  // reported by malformations()
    pos_[m] = static_cast<std::uint32_t>(out_[src_[m]].size());
    out_[src_[m]].push_back(m);
  }
  comp_.assign(src_.size(), {});
  for (Id f = 0; f < src_.size(); ++f)
    if (tgt_[f] < out_.size()) comp_[f].assign(out_[tgt_[f]].size(), -1);
}

void FinCategory::set_compose(Id g, Id f, Id h) {
  if (src_.at(g) != tgt_.at(f)) throw ModelError("composite of non-composable morphisms");
  comp_.at(f).at(pos_.at(g)) = h;
}

std::optional<Id> FinCategory::compose(Id g, Id f) const {
  if (g >= src_.size() || f >= src_.size() || src_[g] != tgt_[f]) return std::nullopt;
  auto v = comp_[f][pos_[g]];
  if (v < 0) return std::nullopt;
  return static_cast<Id>(v);
}

std::vector<Id> FinCategory::hom(Id a, Id b) const {
  std::vector<Id> out;
  for (Id m : out_.at(a))
    if (tgt_[m] == b) out.push_back(m);
  return out;
}

std::vector<std::string> FinCategory::malformations() const {
  std::vector<std::string> errs;
  const auto n = obj_names_.size();
  const auto m = src_.size();
  for (Id i = 0; i < m; ++i)
    if (src_[i] >= n || tgt_[i] >= n) errs.push_back("morphism " + std::to_string(i) + " has a dangling endpoint");
  if (!errs.empty()) return errs;
  for (Id o = 0; o < n; ++o) {
    if (ident_[o] == kUnset || ident_[o] >= m)
      errs.push_back("object " + std::to_string(o) + " has no identity");
    else if (src_[ident_[o]] != o || tgt_[ident_[o]] != o)
      errs.push_back("identity of object " + std::to_string(o) + " is not an endomorphism of it");
  }
  for (Id f = 0; f < m; ++f)
    for (std::size_t p = 0; p < comp_[f].size(); ++p) {
      Id g = out_[tgt_[f]][p];
      auto h = comp_[f][p];
      if (h < 0) {
        errs.push_back("composite " + std::to_string(g) + " . " + std::to_string(f) + " is missing");
      } else if (static_cast<std::size_t>(h) >= m) {
        errs.push_back("composite " + std::to_string(g) + " . " + std::to_string(f) + " is a dangling id");
      } else if (src_[static_cast<Id>(h)] != src_[f] || tgt_[static_cast<Id>(h)] != tgt_[g]) {
        errs.push_back("composite " + std::to_string(g) + " . " + std::to_string(f) + " has the wrong type");
      }
      if (errs.size() > 20) return errs;
    }
  return errs;
}

FunctorTab compose(const FunctorTab& g, const FunctorTab& f) {
  FunctorTab h;
  h.obj.reserve(f.obj.size());
  h.mor.reserve(f.mor.size());
  for (Id o : f.obj) h.obj.push_back(g.obj.at(o));
  for (Id m : f.mor) h.mor.push_back(g.mor.at(m));
  return h;
}

FunctorTab identity_tab(const FinCategory& c) {
  FunctorTab t;
  for (Id o = 0; o < c.object_count(); ++o) t.obj.push_back(o);
  for (Id m = 0; m < c.morphism_count(); ++m) t.mor.push_back(m);
  return t;
}

// ---- powers

namespace {

std::size_t checked_pow(std::size_t base, int n, std::size_t limit) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (base != 0 && r > limit / base) throw SizeExceeded("power category exceeds the size limit");
    r *= base;
  }
  return r;
}

std::vector<Id> digits(Id id, std::size_t radix, int n) {
  std::vector<Id> d(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<Id>(id % radix);
    id = static_cast<Id>(id / radix);
  }
  return d;
}

Id undigits(const std::vector<Id>& d, std::size_t radix) {
  std::size_t id = 0;
  for (Id x : d) id = id * radix + x;
  return static_cast<Id>(id);
}

FunctorTab power_tab(const FunctorTab& t, const FinCategory& src_base, const FinCategory& tgt_base, int n) {
  FunctorTab out;
  std::size_t no = checked_pow(src_base.object_count(), n, std::numeric_limits<std::size_t>::max() / 2);
  std::size_t nm = checked_pow(src_base.morphism_count(), n, std::numeric_limits<std::size_t>::max() / 2);
  out.obj.reserve(no);
  out.mor.reserve(nm);
  for (Id o = 0; o < no; ++o) {
    auto d = digits(o, src_base.object_count(), n);
    for (auto& x : d) x = t.obj[x];
    out.obj.push_back(undigits(d, tgt_base.object_count()));
  }
  for (Id m = 0; m < nm; ++m) {
    auto d = digits(m, src_base.morphism_count(), n);
    for (auto& x : d) x = t.mor[x];
    out.mor.push_back(undigits(d, tgt_base.morphism_count()));
  }
  return out;
}

std::string tuple_name(const std::vector<Id>& d, const FinCategory& base, bool object) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += object ? base.object_name(d[i]) : base.morphism_name(d[i]);
  }
  return s + ")";
}

}  // namespace

RgPtr power(const RgPtr& x, int n, std::size_t max_size) {
  if (n == 1) return x;
  auto p = std::make_shared<RgCategory>();
  p->power_base = x;
  p->power_n = n;
  p->face_mode = x->face_mode;
  p->name = x->name + "^" + std::to_string(n);
  for (int l = 0; l < 2; ++l) {
    const FinCategory& b = x->level[l];
    FinCategory& c = p->level[l];
    std::size_t no = checked_pow(b.object_count(), n, max_size);
    std::size_t nm = checked_pow(b.morphism_count(), n, max_size);
    for (Id o = 0; o < no; ++o) c.add_object(tuple_name(digits(o, b.object_count(), n), b, true));
    for (Id m = 0; m < nm; ++m) {
      auto d = digits(m, b.morphism_count(), n);
      std::vector<Id> s(d.size()), t(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        s[i] = b.src(d[i]);
        t[i] = b.tgt(d[i]);
      }
      c.add_morphism(undigits(s, b.object_count()), undigits(t, b.object_count()), tuple_name(d, b, false));
    }
    for (Id o = 0; o < no; ++o) {
      auto d = digits(o, b.object_count(), n);
      for (auto& v : d) v = b.identity(v);
      c.set_identity(o, undigits(d, b.morphism_count()));
    }
    c.finalize_shape();
    for (Id f = 0; f < nm; ++f) {
      auto df = digits(f, b.morphism_count(), n);
      for (Id g : c.out(c.tgt(f))) {
        auto dg = digits(g, b.morphism_count(), n);
        std::vector<Id> dh(df.size());
        bool ok = true;
        for (std::size_t i = 0; i < df.size() && ok; ++i) {
          auto h = b.compose(dg[i], df[i]);
          if (!h)
            ok = false;
          else
            dh[i] = *h;
        }
        if (ok) c.set_compose(g, f, undigits(dh, b.morphism_count()));
      }
    }
  }
  p->face_top = power_tab(x->face_top, x->level[1], x->level[0], n);
  p->face_bot = power_tab(x->face_bot, x->level[1], x->level[0], n);
  p->degen = power_tab(x->degen, x->level[0], x->level[1], n);
  return p;
}

std::vector<Id> decode(const RgCategory& p, int level, Id id, bool object) {
  if (p.power_n < 0) return {id};
  const FinCategory& b = p.power_base->level[level];
  return digits(id, object ? b.object_count() : b.morphism_count(), p.power_n);
}

Id encode(const RgCategory& p, int level, const std::vector<Id>& parts, bool object) {
  if (p.power_n < 0) {
    if (parts.size() != 1) throw ModelError("encode: arity mismatch");
    return parts[0];
  }
  if (static_cast<int>(parts.size()) != p.power_n) throw ModelError("encode: arity mismatch");
  const FinCategory& b = p.power_base->level[level];
  return undigits(parts, object ? b.object_count() : b.morphism_count());
}

IsoSubcategory power_iso(const RgCategory& p, const IsoSubcategory& m) {
  if (p.power_n < 0) return m;
  IsoSubcategory out;
  for (int l = 0; l < 2; ++l) {
    out.selected[l].resize(p.level[l].morphism_count());
    for (Id i = 0; i < p.level[l].morphism_count(); ++i) {
      bool all = true;
      for (Id c : decode(p, l, i, false)) all = all && m.selected[l].at(c);
      out.selected[l][i] = all;
    }
  }
  return out;
}

// ---- functors and natural transformations

FunPtr identity_functor(const RgPtr& x) {
  auto f = std::make_shared<RgFunctorTab>();
  f->dom = x;
  f->cod = x;
  f->name = "id";
  for (int l = 0; l < 2; ++l) f->f[l] = identity_tab(x->level[l]);
  for (Id a = 0; a < x->level[0].object_count(); ++a) f->eps.push_back(x->level[1].identity(x->degen.obj[a]));
  return f;
}

FunPtr compose_functor(const FunPtr& g, const FunPtr& f) {
  if (f->cod != g->dom) throw ModelError("composition of non-composable functors");
  auto h = std::make_shared<RgFunctorTab>();
  h->dom = f->dom;
  h->cod = g->cod;
  h->name = "(" + g->name + " . " + f->name + ")";
  for (int l = 0; l < 2; ++l) h->f[l] = compose(g->f[l], f->f[l]);
  const FinCategory& z1 = g->cod->level[1];
  for (Id a = 0; a < f->dom->level[0].object_count(); ++a) {
    Id first = g->eps.at(f->f[0].obj[a]);
    Id second = g->f[1].mor.at(f->eps.at(a));
    auto c = z1.compose(second, first);
    if (!c) throw ModelError("composite functor: epsilon components do not compose");
    h->eps.push_back(*c);
  }
  return h;
}

FunPtr projection(const RgPtr& p, int i) {
  if (p->power_n < 0) {
    if (i != 0) throw ModelError("projection index out of range");
    return identity_functor(p);
  }
  if (i < 0 || i >= p->power_n) throw ModelError("projection index out of range");
  auto f = std::make_shared<RgFunctorTab>();
  f->dom = p;
  f->cod = p->power_base;
  f->name = "pr" + std::to_string(i);
  for (int l = 0; l < 2; ++l) {
    for (Id o = 0; o < p->level[l].object_count(); ++o) f->f[l].obj.push_back(decode(*p, l, o, true)[i]);
    for (Id m = 0; m < p->level[l].morphism_count(); ++m) f->f[l].mor.push_back(decode(*p, l, m, false)[i]);
  }
  for (Id a = 0; a < p->level[0].object_count(); ++a) {
    Id comp = f->f[0].obj[a];
    f->eps.push_back(p->power_base->level[1].identity(p->power_base->degen.obj[comp]));
  }
  return f;
}

FunPtr tuple(const std::vector<FunPtr>& fs, const RgPtr& target) {
  auto t = std::make_shared<RgFunctorTab>();
  t->cod = target;
  t->name = "<";
  if (fs.empty()) {
    throw ModelError("tuple of zero functors needs an explicit domain");
  }
  t->dom = fs[0]->dom;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i]->dom != t->dom) throw ModelError("tuple components have different domains");
    t->name += (i ? "," : "") + fs[i]->name;
  }
  t->name += ">";
  for (int l = 0; l < 2; ++l) {
    for (Id o = 0; o < t->dom->level[l].object_count(); ++o) {
      std::vector<Id> parts;
      for (const auto& f : fs) parts.push_back(f->f[l].obj[o]);
      t->f[l].obj.push_back(encode(*target, l, parts, true));
    }
    for (Id m = 0; m < t->dom->level[l].morphism_count(); ++m) {
      std::vector<Id> parts;
      for (const auto& f : fs) parts.push_back(f->f[l].mor[m]);
      t->f[l].mor.push_back(encode(*target, l, parts, false));
    }
  }
  for (Id a = 0; a < t->dom->level[0].object_count(); ++a) {
    std::vector<Id> parts;
    for (const auto& f : fs) parts.push_back(f->eps[a]);
    t->eps.push_back(encode(*target, 1, parts, false));
  }
  return t;
}

RgNatTab identity_nat(const FunPtr& f) {
  RgNatTab n;
  n.src = f;
  n.tgt = f;
  for (int l = 0; l < 2; ++l)
    for (Id o : f->f[l].obj) n.eta[l].push_back(f->cod->level[l].identity(o));
  return n;
}

RgNatTab compose_nat(const RgNatTab& theta, const RgNatTab& eta) {
  RgNatTab n;
  n.src = eta.src;
  n.tgt = theta.tgt;
  for (int l = 0; l < 2; ++l)
    for (std::size_t i = 0; i < eta.eta[l].size(); ++i) {
      auto c = eta.src->cod->level[l].compose(theta.eta[l].at(i), eta.eta[l][i]);
      if (!c) throw ModelError("vertical composite of non-composable transformations");
      n.eta[l].push_back(*c);
    }
  return n;
}

RgNatTab whisker_right(const RgNatTab& eta, const FunPtr& f) {
  RgNatTab n;
  n.src = compose_functor(eta.src, f);
  n.tgt = compose_functor(eta.tgt, f);
  for (int l = 0; l < 2; ++l)
    for (Id o : f->f[l].obj) n.eta[l].push_back(eta.eta[l].at(o));
  return n;
}

RgNatTab whisker_left(const FunPtr& g, const RgNatTab& eta) {
  RgNatTab n;
  n.src = compose_functor(g, eta.src);
  n.tgt = compose_functor(g, eta.tgt);
  for (int l = 0; l < 2; ++l)
    for (Id m : eta.eta[l]) n.eta[l].push_back(g->f[l].mor.at(m));
  return n;
}

RgNatTab tuple_nat(const std::vector<RgNatTab>& etas, const FunPtr& src, const FunPtr& tgt) {
  RgNatTab n;
  n.src = src;
  n.tgt = tgt;
  for (int l = 0; l < 2; ++l)
    for (Id o = 0; o < src->dom->level[l].object_count(); ++o) {
      std::vector<Id> parts;
      for (const auto& e : etas) parts.push_back(e.eta[l].at(o));
      n.eta[l].push_back(encode(*src->cod, l, parts, false));
    }
  return n;
}

bool same_functor(const RgFunctorTab& a, const RgFunctorTab& b) {
  return a.dom == b.dom && a.cod == b.cod && a.f[0] == b.f[0] && a.f[1] == b.f[1] && a.eps == b.eps;
}

bool same_nat(const RgNatTab& a, const RgNatTab& b) {
  return same_functor(*a.src, *b.src) && same_functor(*a.tgt, *b.tgt) && a.eta[0] == b.eta[0] &&
         a.eta[1] == b.eta[1];
}

// ---- json

namespace {

nlohmann::json tab_json(const FunctorTab& t, Id obj_off_src, Id obj_off_tgt, Id mor_off_src, Id mor_off_tgt) {
  nlohmann::json j;
  auto o = nlohmann::json::array();
  for (Id i = 0; i < t.obj.size(); ++i) o.push_back({i + obj_off_src, t.obj[i] + obj_off_tgt});
  auto m = nlohmann::json::array();
  for (Id i = 0; i < t.mor.size(); ++i) m.push_back({i + mor_off_src, t.mor[i] + mor_off_tgt});
  j["objects"] = o;
  j["morphisms"] = m;
  return j;
}

}  // namespace

nlohmann::json to_json(const RgCategory& x, const IsoSubcategory& m) {
  nlohmann::json j;
  j["name"] = x.name;
  j["face_mode"] = x.face_mode == FaceMode::Tables ? "tables" : "formal";
  const Id oo = static_cast<Id>(x.level[0].object_count());
  const Id mo = static_cast<Id>(x.level[0].morphism_count());
  auto levels = nlohmann::json::array();
  for (int l = 0; l < 2; ++l) {
    const FinCategory& c = x.level[l];
    const Id ob = l ? oo : 0, mb = l ? mo : 0;
    nlohmann::json lj;
    auto objs = nlohmann::json::array();
    for (Id o = 0; o < c.object_count(); ++o)
      objs.push_back({{"id", o + ob}, {"name", c.object_name(o)}, {"identity", c.identity(o) + mb}});
    auto mors = nlohmann::json::array();
    for (Id f = 0; f < c.morphism_count(); ++f)
      mors.push_back({{"id", f + mb}, {"src", c.src(f) + ob}, {"tgt", c.tgt(f) + ob}, {"name", c.morphism_name(f)},
                      {"relevant", static_cast<bool>(m.selected[l].at(f))}});
    auto comp = nlohmann::json::array();
    for (Id f = 0; f < c.morphism_count(); ++f)
      for (Id g : c.out(c.tgt(f)))
        if (auto h = c.compose(g, f)) comp.push_back({g + mb, f + mb, *h + mb});
    lj["objects"] = objs;
    lj["morphisms"] = mors;
    lj["compose"] = comp;
    levels.push_back(lj);
  }
  j["levels"] = levels;
  j["face_top"] = tab_json(x.face_top, oo, 0, mo, 0);
  j["face_bot"] = tab_json(x.face_bot, oo, 0, mo, 0);
  j["degen"] = tab_json(x.degen, 0, oo, 0, mo);
  return j;
}

std::pair<RgCategory, IsoSubcategory> rg_from_json(const nlohmann::json& j) {
  RgCategory x;
  IsoSubcategory m;
  auto bad = [](const std::string& s) { return ModelError("malformed rg instance: " + s); };
  if (!j.contains("levels") || j["levels"].size() != 2) throw bad("expected two levels");
  x.name = j.value("name", "");
  x.face_mode = j.value("face_mode", "tables") == "formal" ? FaceMode::Formal : FaceMode::Tables;
  const auto& l0 = j["levels"][0];
  const Id oo = static_cast<Id>(l0.at("objects").size());
  const Id mo = static_cast<Id>(l0.at("morphisms").size());
  for (int l = 0; l < 2; ++l) {
    const auto& lj = j["levels"][l];
    FinCategory& c = x.level[l];
    const Id ob = l ? oo : 0, mb = l ? mo : 0;
    const Id no = static_cast<Id>(lj.at("objects").size());
    const Id nm = static_cast<Id>(lj.at("morphisms").size());
    auto local = [&](const nlohmann::json& v, Id base, Id count, const char* what) {
      if (!v.is_number_unsigned()) throw bad(std::string(what) + " id is not a natural number");
      auto id = v.get<std::uint64_t>();
      if (id < base || id >= static_cast<std::uint64_t>(base) + count)
        throw bad(std::string("dangling ") + what + " id " + std::to_string(id) + " at level " + std::to_string(l));
      return static_cast<Id>(id - base);
    };
    for (Id o = 0; o < no; ++o) {
      const auto& oj = lj["objects"][o];
      if (local(oj.at("id"), ob, no, "object") != o) throw bad("object ids must be listed in order");
      c.add_object(oj.value("name", ""));
    }
    m.selected[l].assign(nm, false);
    for (Id f = 0; f < nm; ++f) {
      const auto& mj = lj["morphisms"][f];
      if (local(mj.at("id"), mb, nm, "morphism") != f) throw bad("morphism ids must be listed in order");
      c.add_morphism(local(mj.at("src"), ob, no, "object"), local(mj.at("tgt"), ob, no, "object"),
                     mj.value("name", ""));
      m.selected[l][f] = mj.value("relevant", false);
    }
    for (Id o = 0; o < no; ++o) c.set_identity(o, local(lj["objects"][o].at("identity"), mb, nm, "morphism"));
    c.finalize_shape();
    for (const auto& t : lj.at("compose")) {
      Id g = local(t.at(0), mb, nm, "morphism");
      Id f = local(t.at(1), mb, nm, "morphism");
      Id h = local(t.at(2), mb, nm, "morphism");
      if (c.src(g) != c.tgt(f)) throw bad("composite of non-composable morphisms");
      c.set_compose(g, f, h);
    }
  }
  auto read_tab = [&](const char* key, int from, int to) {
    FunctorTab t;
    const auto& tj = j.at(key);
    const Id fo = from ? oo : 0, fm = from ? mo : 0, to_o = to ? oo : 0, to_m = to ? mo : 0;
    const auto& fc = x.level[from];
    const auto& tc = x.level[to];
    t.obj.assign(fc.object_count(), kUnset);
    t.mor.assign(fc.morphism_count(), kUnset);
    for (const auto& p : tj.at("objects")) {
      auto s = p.at(0).get<std::uint64_t>(), v = p.at(1).get<std::uint64_t>();
      if (s < fo || s >= fo + fc.object_count() || v < to_o || v >= to_o + tc.object_count())
        throw bad(std::string("dangling object id in ") + key);
      t.obj[s - fo] = static_cast<Id>(v - to_o);
    }
    for (const auto& p : tj.at("morphisms")) {
      auto s = p.at(0).get<std::uint64_t>(), v = p.at(1).get<std::uint64_t>();
      if (s < fm || s >= fm + fc.morphism_count() || v < to_m || v >= to_m + tc.morphism_count())
        throw bad(std::string("dangling morphism id in ") + key);
      t.mor[s - fm] = static_cast<Id>(v - to_m);
    }
    for (Id v : t.obj)
      if (v == kUnset) throw bad(std::string(key) + " is not total on objects");
    for (Id v : t.mor)
      if (v == kUnset) throw bad(std::string(key) + " is not total on morphisms");
    return t;
  };
  x.face_top = read_tab("face_top", 1, 0);
  x.face_bot = read_tab("face_bot", 1, 0);
  x.degen = read_tab("degen", 0, 1);
  return {std::move(x), std::move(m)};
}

}  // namespace pwb::rg
