#include "pwb/error.hpp"
#include "pwb/fibration.hpp"

namespace pwb::fib {

namespace {

TF node(FNode n) {
  n.hash = std::hash<std::string>{}(n.key);
  return std::make_shared<const FNode>(std::move(n));
}

void same_arity(const TF& a, const TF& b) {
  if (a->arity != b->arity) throw ModelError("functor arities differ: " + a->key + " and " + b->key);
}

}  // namespace

TF proj(int n, int i) {
  if (i < 0 || i >= n) throw ModelError("projection index " + std::to_string(i) + " out of range for arity " + std::to_string(n));
  return node({FKind::Proj, n, i, nullptr, nullptr, {}, "p" + std::to_string(i) + "/" + std::to_string(n)});
}

TF unit_f(int n) {
  if (n < 0) throw ModelError("negative arity");
  return node({FKind::Unit, n, 0, nullptr, nullptr, {}, "1/" + std::to_string(n)});
}

TF prod_f(TF a, TF b) {
  same_arity(a, b);
  std::string k = "(" + a->key + " * " + b->key + ")";
  int n = a->arity;
  return node({FKind::Prod, n, 0, std::move(a), std::move(b), {}, std::move(k)});
}

TF arrow_f(TF a, TF b) {
  same_arity(a, b);
  std::string k = "(" + a->key + " -> " + b->key + ")";
  int n = a->arity;
  return node({FKind::Arrow, n, 0, std::move(a), std::move(b), {}, std::move(k)});
}

TF forall_f(TF body) {
  if (body->arity < 1) throw ModelError("quantified functor needs a positive arity");
  std::string k = "(all " + body->key + ")";
  int n = body->arity - 1;
  return node({FKind::Forall, n, 0, std::move(body), nullptr, {}, std::move(k)});
}

TF subst_f(TF g, std::vector<TF> args, int n) {
  if (static_cast<int>(args.size()) != g->arity) throw ModelError("substitution needs one argument per entry of " + g->key);
  std::string k = g->key + "[";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i]->arity != n) throw ModelError("substitution argument " + args[i]->key + " has the wrong arity");
    k += (i ? ", " : "") + args[i]->key;
  }
  k += "]/" + std::to_string(n);
  return node({FKind::Subst, n, 0, std::move(g), nullptr, std::move(args), std::move(k)});
}

bool has_forall(const TF& f) {
  switch (f->kind) {
    case FKind::Proj:
    case FKind::Unit: return false;
    case FKind::Prod:
    case FKind::Arrow: return has_forall(f->a) || has_forall(f->b);
    case FKind::Forall: return true;
    case FKind::Subst:
      if (has_forall(f->a)) return true;
      for (const auto& x : f->args)
        if (has_forall(x)) return true;
      return false;
  }
  return false;
}

std::size_t functor_size(const TF& f) {
  switch (f->kind) {
    case FKind::Proj:
    case FKind::Unit: return 1;
    case FKind::Prod:
    case FKind::Arrow: return 1 + functor_size(f->a) + functor_size(f->b);
    case FKind::Forall: return 1 + functor_size(f->a);
    case FKind::Subst: {
      std::size_t s = 1 + functor_size(f->a);
      for (const auto& x : f->args) s += functor_size(x);
      return s;
    }
  }
  return 1;
}

TF substitute(const TF& g, const std::vector<TF>& args, int n) {
  if (static_cast<int>(args.size()) != g->arity)
    throw ModelError("substitution into " + g->key + " needs " + std::to_string(g->arity) + " arguments");
  for (const auto& x : args)
    if (x->arity != n) throw ModelError("substitution argument " + x->key + " has the wrong arity");
  switch (g->kind) {
    case FKind::Proj: return args[static_cast<std::size_t>(g->index)];
    case FKind::Unit: return unit_f(n);
    case FKind::Prod: return prod_f(substitute(g->a, args, n), substitute(g->b, args, n));
    case FKind::Arrow: return arrow_f(substitute(g->a, args, n), substitute(g->b, args, n));
    case FKind::Forall: {
      std::vector<TF> ext;
      for (const auto& x : args) ext.push_back(weaken(x));
      ext.push_back(proj(n + 1, n));
      return forall_f(substitute(g->a, ext, n + 1));
    }
    case FKind::Subst: {
      std::vector<TF> inner;
      for (const auto& x : g->args) inner.push_back(substitute(x, args, n));
      return substitute(g->a, inner, n);
    }
  }
  throw ModelError("unknown functor node");
}

TF eager(const TF& f) {
  std::vector<TF> ps;
  for (int i = 0; i < f->arity; ++i) ps.push_back(proj(f->arity, i));
  return substitute(f, ps, f->arity);
}

TF weaken(const TF& f) {
  std::vector<TF> ps;
  for (int i = 0; i < f->arity; ++i) ps.push_back(proj(f->arity + 1, i));
  return substitute(f, ps, f->arity + 1);
}

TF from_type(const sf::Type& t, int depth) {
  switch (t->kind) {
    case sf::TypeKind::Var:
      if (t->index >= depth) throw ModelError("type variable out of scope");
      return proj(depth, depth - 1 - t->index);
    case sf::TypeKind::Unit: return unit_f(depth);
    case sf::TypeKind::Prod: return prod_f(from_type(t->a, depth), from_type(t->b, depth));
    case sf::TypeKind::Arrow: return arrow_f(from_type(t->a, depth), from_type(t->b, depth));
    case sf::TypeKind::Forall: return forall_f(from_type(t->a, depth + 1));
  }
  throw ModelError("unknown type node");
}

}  // namespace pwb::fib
