#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "pwb/error.hpp"
#include "pwb/interp.hpp"

namespace pwb::interp {

namespace {

// ---- semantic values of erased terms

struct Val;
using V = std::shared_ptr<const Val>;

struct Val {
  enum class K { Elem, Fun, Pair, Unit } k;
  Label elem;
  std::function<V(const V&)> fn;
  V a, b;
};

V elem(const Label& x) { return std::make_shared<Val>(Val{Val::K::Elem, x, {}, nullptr, nullptr}); }
V unit_v() { return std::make_shared<Val>(Val{Val::K::Unit, {}, {}, nullptr, nullptr}); }
V pair_v(V a, V b) { return std::make_shared<Val>(Val{Val::K::Pair, {}, {}, std::move(a), std::move(b)}); }
V fun_v(std::function<V(const V&)> f) { return std::make_shared<Val>(Val{Val::K::Fun, {}, std::move(f), nullptr, nullptr}); }

struct Env {
  V head;
  std::shared_ptr<const Env> tail;
};
using EnvP = std::shared_ptr<const Env>;

struct Fuel {
  std::uint64_t left;
  void tick() {
    if (left == 0) throw FuelExhausted("evaluation fuel exhausted");
    --left;
  }
};

V eval(const sf::UTerm& t, const EnvP& env, Fuel* fuel) {
  switch (t->kind) {
    case sf::UKind::Var: {
      const Env* e = env.get();
      for (int i = 0; i < t->index && e; ++i) e = e->tail.get();
      if (!e) throw ModelError("free variable in erased term");
      return e->head;
    }
    case sf::UKind::Lam: {
      sf::UTerm body = t->a;
      return fun_v([body, env, fuel](const V& x) { return eval(body, std::make_shared<const Env>(Env{x, env}), fuel); });
    }
    case sf::UKind::App: {
      V f = eval(t->a, env, fuel);
      if (f->k != Val::K::Fun) throw ModelError("erased application of a non-function");
      fuel->tick();
      return f->fn(eval(t->b, env, fuel));
    }
    case sf::UKind::Pair: return pair_v(eval(t->a, env, fuel), eval(t->b, env, fuel));
    case sf::UKind::Fst:
    case sf::UKind::Snd: {
      V p = eval(t->a, env, fuel);
      if (p->k != Val::K::Pair) throw ModelError("erased projection of a non-pair");
      return t->kind == sf::UKind::Fst ? p->a : p->b;
    }
    case sf::UKind::Unit: return unit_v();
  }
  throw ModelError("unknown erased term");
}

V call(const V& f, const V& x) {
  if (f->k != Val::K::Fun) throw ModelError("application of a non-function value");
  return f->fn(x);
}

// ---- logical relation

struct Inst {
  FinSet a, b;
  Rel r;
};

struct NonEnumerable : Error {
  using Error::Error;
};

constexpr std::size_t kMaxValues = 4096;

class Checker {
 public:
  Checker(std::vector<Inst> insts, std::vector<std::pair<sf::Type, V>> supplied, Fuel* fuel, std::uint64_t budget)
      : insts_(std::move(insts)), supplied_(std::move(supplied)), fuel_(fuel), budget_(budget) {}

  // rho.back() instantiates variable 0
  bool related(const sf::Type& t, std::vector<const Inst*>& rho, const V& x, const V& y) {
    switch (t->kind) {
      case sf::TypeKind::Var: return inst(rho, t->index).r.related(x->elem, y->elem);
      case sf::TypeKind::Unit: return true;
      case sf::TypeKind::Prod: return related(t->a, rho, x->a, y->a) && related(t->b, rho, x->b, y->b);
      case sf::TypeKind::Arrow:
        for (const auto& [u, v] : related_pairs(t->a, rho))
          if (!related(t->b, rho, call(x, u), call(y, v))) {
            if (cex_.is_null()) cex_ = {{"at", sf::pretty(t)}};
            return false;
          }
        return true;
      case sf::TypeKind::Forall:
        for (const auto& i : insts_) {
          rho.push_back(&i);
          ++instances_;
          fuel_->left = budget_;  // each instance is evaluated on its own budget
          bool ok = related(t->a, rho, x, y);
          rho.pop_back();
          if (!ok) {
            if (cex_.is_null() || !cex_.contains("relation"))
              cex_["relation"] = fm::to_json(i.r);
            return false;
          }
        }
        return true;
    }
    return false;
  }

  std::size_t instances() const { return instances_; }
  const nlohmann::json& counterexample() const { return cex_; }

 private:
  static const Inst& inst(const std::vector<const Inst*>& rho, int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= rho.size()) throw ModelError("free type variable");
    return *rho[rho.size() - 1 - i];
  }

  // Values of t with every variable read on one side of its relation.
  std::optional<std::vector<V>> values(const sf::Type& t, const std::vector<const Inst*>& rho, int side) {
    switch (t->kind) {
      case sf::TypeKind::Var: {
        const Inst& i = inst(rho, t->index);
        std::vector<V> out;
        for (const auto& x : (side == 0 ? i.a : i.b).elements()) out.push_back(elem(x));
        return out;
      }
      case sf::TypeKind::Unit: return std::vector<V>{unit_v()};
      case sf::TypeKind::Prod: {
        auto l = values(t->a, rho, side), r = values(t->b, rho, side);
        if (!l || !r || l->size() * r->size() > kMaxValues) return std::nullopt;
        std::vector<V> out;
        for (const auto& x : *l)
          for (const auto& y : *r) out.push_back(pair_v(x, y));
        return out;
      }
      case sf::TypeKind::Arrow: {
        auto dom = values(t->a, rho, side), cod = values(t->b, rho, side);
        if (!dom || !cod) return std::nullopt;
        double count = 1;
        for (std::size_t i = 0; i < dom->size(); ++i) count *= static_cast<double>(cod->size());
        if (count > kMaxValues) return std::nullopt;
        std::vector<V> out;
        std::vector<std::size_t> pick(dom->size(), 0);
        auto domp = std::make_shared<const std::vector<V>>(*dom);
        sf::Type s = t->a;
        auto rho_copy = rho;
        for (;;) {
          std::vector<V> img;
          for (auto p : pick) img.push_back((*cod)[p]);
          out.push_back(fun_v([this, domp, img, s, rho_copy, side](const V& x) {
            for (std::size_t i = 0; i < domp->size(); ++i)
              if (equal(s, rho_copy, side, (*domp)[i], x)) return img[i];
            throw ModelError("argument outside the enumerated domain");
          }));
          std::size_t k = 0;
          while (k < pick.size() && ++pick[k] == cod->size()) pick[k++] = 0;
          if (k == pick.size()) break;
        }
        return out;
      }
      case sf::TypeKind::Forall: return std::nullopt;
    }
    return std::nullopt;
  }

  bool equal(const sf::Type& t, const std::vector<const Inst*>& rho, int side, const V& x, const V& y) {
    switch (t->kind) {
      case sf::TypeKind::Var: return x->elem == y->elem;
      case sf::TypeKind::Unit: return true;
      case sf::TypeKind::Prod: return equal(t->a, rho, side, x->a, y->a) && equal(t->b, rho, side, x->b, y->b);
      case sf::TypeKind::Arrow: {
        auto dom = values(t->a, rho, side);
        if (!dom) throw NonEnumerable("cannot compare values of " + sf::pretty(t));
        for (const auto& d : *dom)
          if (!equal(t->b, rho, side, call(x, d), call(y, d))) return false;
        return true;
      }
      case sf::TypeKind::Forall: throw NonEnumerable("cannot compare values of " + sf::pretty(t));
    }
    return false;
  }

  std::vector<std::pair<V, V>> related_pairs(const sf::Type& s, std::vector<const Inst*>& rho) {
    auto l = values(s, rho, 0), r = values(s, rho, 1);
    std::vector<std::pair<V, V>> out;
    if (l && r) {
      for (const auto& x : *l)
        for (const auto& y : *r)
          if (related(s, rho, x, y)) out.emplace_back(x, y);
      return out;
    }
    if (sf::is_closed(s)) {
      for (const auto& [ty, v] : supplied_)
        if (sf::type_equal(ty, s)) out.emplace_back(v, v);
      if (!out.empty()) return out;
    }
    throw NonEnumerable("argument position of type " + sf::pretty(s) + " cannot be enumerated");
  }

  std::vector<Inst> insts_;
  std::vector<std::pair<sf::Type, V>> supplied_;
  Fuel* fuel_;
  std::uint64_t budget_;
  std::size_t instances_ = 0;
  nlohmann::json cex_;
};

int forall_count(const sf::Type& t) {
  if (!t) return 0;
  return (t->kind == sf::TypeKind::Forall ? 1 : 0) + forall_count(t->a) + forall_count(t->b);
}

std::vector<Inst> instances(const FreeThmOptions& opt, bool reduced) {
  std::vector<Inst> out;
  if (!opt.relations.empty()) {
    for (const auto& r : opt.relations) out.push_back({r.dom(), r.cod(), r});
    return out;
  }
  for (int p : opt.carriers)
    for (int q : opt.carriers) {
      FinSet a = FinSet::atoms(p), b = FinSet::atoms(q);
      if (!reduced && p * q <= 9) {
        for (const auto& r : fm::all_prop_relations(a, b)) out.push_back({a, b, r});
        continue;
      }
      for (const auto& x : a.elements())
        for (const auto& y : b.elements()) out.push_back({a, b, Rel::from_pairs(a, b, {{x, y}})});
      if (p == q) {
        std::vector<std::pair<Label, Label>> diag;
        for (const auto& x : a.elements()) diag.emplace_back(x, x);
        out.push_back({a, b, Rel::from_pairs(a, b, diag)});
      }
    }
  return out;
}

std::string carriers_str(const std::vector<int>& cs) {
  std::ostringstream o;
  for (std::size_t i = 0; i < cs.size(); ++i) o << (i ? "," : "") << cs[i];
  return o.str();
}

}  // namespace

std::vector<int> parse_carriers(const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (c != '{' && c != '}' && c != ' ') s += c;
  std::vector<int> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    if (part.empty()) continue;
    auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoi(part));
      } else {
        int lo = std::stoi(part.substr(0, dash)), hi = std::stoi(part.substr(dash + 1));
        for (int k = lo; k <= hi; ++k) out.push_back(k);
      }
    } catch (const std::logic_error&) {
      throw ModelError("bad carrier specification '" + spec + "'");
    }
  }
  for (int k : out)
    if (k < 1 || k > 8) throw ModelError("carrier sizes must lie in 1..8");
  if (out.empty()) throw ModelError("empty carrier specification");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FreeThmResult free_theorem_check(const sf::Term& t, const sf::Type& ty, const std::vector<sf::Definition>& prog,
                                 const FreeThmOptions& opt) {
  FreeThmResult res;
  Report& r = res.report;
  const std::string anchor = "free_theorem";
  try {
    Fuel fuel{opt.fuel};
    auto value_of = [&](const sf::Term& term) {
      return eval(sf::normalize(sf::erase(term), opt.fuel), nullptr, &fuel);
    };
    V v = value_of(t);

    std::vector<std::pair<sf::Type, V>> supplied;
    for (const auto& d : prog) {
      try {
        supplied.push_back(std::make_pair(sf::type_of(d.term), value_of(d.term)));
      } catch (const Error&) {
      }
    }

    auto full = instances(opt, false);
    double combos = 1;
    for (int i = 0; i < forall_count(ty); ++i) combos *= static_cast<double>(full.size());
    bool reduced = combos > static_cast<double>(opt.max_instances) && opt.relations.empty();
    Checker ck(reduced ? instances(opt, true) : full, supplied, &fuel, opt.fuel);
    std::vector<const Inst*> rho;
    bool ok = ck.related(ty, rho, v, v);
    std::string detail = std::to_string(ck.instances()) + " relation instances over carriers " +
                         carriers_str(opt.carriers) + (reduced ? " (singletons and equality)" : "");
    auto cx = ck.counterexample();
    if (!ok) cx["type"] = sf::pretty(ty);
    r.check(ok, "freethm.relation", anchor, cx, detail);
    res.verdict = ok ? "parametric" : "fail";

    // pointwise classification for the two shapes with a known answer
    if (ok && sf::type_equal(ty, sf::parse_type("forall a. a -> a"))) {
      bool id = true;
      for (int p : opt.carriers) {
        FinSet a = FinSet::atoms(p);
        for (const auto& x : a.elements()) id = id && call(v, elem(x))->elem == x;
      }
      res.verdict = id ? "identity" : "fail";
      r.check(id, "freethm.identity", anchor, {{"type", sf::pretty(ty)}}, "carriers " + carriers_str(opt.carriers));
    } else if (ok && sf::type_equal(ty, sf::parse_type("forall a. a -> a -> a"))) {
      bool first = true, second = true;
      for (int p : opt.carriers) {
        FinSet a = FinSet::atoms(p);
        for (const auto& x : a.elements())
          for (const auto& y : a.elements()) {
            Label z = call(call(v, elem(x)), elem(y))->elem;
            first = first && z == x;
            second = second && z == y;
          }
      }
      res.verdict = first ? "first projection" : second ? "second projection" : "fail";
      r.check(first || second, "freethm.projection", anchor, {{"type", sf::pretty(ty)}},
              res.verdict + " on carriers " + carriers_str(opt.carriers));
    }
  } catch (const NonEnumerable& e) {
    res.verdict = "skip";
    r.skip("freethm.relation", anchor, e.what());
  } catch (const FuelExhausted& e) {
    res.verdict = "skip";
    r.skip("freethm.relation", anchor, e.what());
  }
  return res;
}

}  // namespace pwb::interp
