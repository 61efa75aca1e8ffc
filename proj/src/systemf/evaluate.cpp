#include <cstdlib>
#include <string>

#include "pwb/systemf.hpp"
#include "systemf/internal.hpp"

namespace pwb::sf {

bool well_formed(const Type& t, int depth) { return type_free_bound(t) <= depth; }

namespace {

std::string show(const Type& t) { return pretty(t); }

Type synth(const Term& t, Context& ctx) {
  switch (t->kind) {
    case TermKind::Var: {
      if (t->index < 0 || static_cast<std::size_t>(t->index) >= ctx.vars.size())
        throw TypeError(TypeError::Code::Unbound, "de Bruijn index " + std::to_string(t->index) + " out of range");
      return ctx.vars[ctx.vars.size() - 1 - static_cast<std::size_t>(t->index)];
    }
    case TermKind::Unit: return tunit();
    case TermKind::Lam: {
      if (!well_formed(t->ty, ctx.type_depth))
        throw TypeError(TypeError::Code::IllScoped, "annotation " + show(t->ty) + " mentions an unbound type variable");
      ctx.vars.push_back(t->ty);
      Type body = synth(t->a, ctx);
      ctx.vars.pop_back();
      return tarrow(t->ty, body);
    }
    case TermKind::App: {
      Type f = synth(t->a, ctx);
      if (f->kind != TypeKind::Arrow)
        throw TypeError(TypeError::Code::NotFunction, "'" + pretty(t->a) + "' has type " + show(f));
      Type a = synth(t->b, ctx);
      if (!type_equal(f->a, a))
        throw TypeError(TypeError::Code::Mismatch,
                        "argument '" + pretty(t->b) + "' has type " + show(a) + ", expected " + show(f->a));
      return f->b;
    }
    case TermKind::Pair: {
      Type a = synth(t->a, ctx);
      return tprod(a, synth(t->b, ctx));
    }
    case TermKind::Fst:
    case TermKind::Snd: {
      Type p = synth(t->a, ctx);
      if (p->kind != TypeKind::Prod)
        throw TypeError(TypeError::Code::NotPair, "'" + pretty(t->a) + "' has type " + show(p));
      return t->kind == TermKind::Fst ? p->a : p->b;
    }
    case TermKind::TyLam: {
      Context inner;
      inner.type_depth = ctx.type_depth + 1;
      inner.vars.reserve(ctx.vars.size());
      for (const auto& v : ctx.vars) inner.vars.push_back(shift_type(v, 1, 0));
      return tforall(synth(t->a, inner), t->hint);
    }
    case TermKind::TyApp: {
      Type f = synth(t->a, ctx);
      if (f->kind != TypeKind::Forall)
        throw TypeError(TypeError::Code::NotForall, "'" + pretty(t->a) + "' has type " + show(f));
      if (!well_formed(t->ty, ctx.type_depth))
        throw TypeError(TypeError::Code::IllScoped, "type argument " + show(t->ty) + " is ill-scoped");
      return subst_type(f->a, t->ty);
    }
  }
  throw TypeError(TypeError::Code::Mismatch, "unknown term");
}

}  // namespace

Type type_of(const Term& t, const Context& ctx) {
  Context c = ctx;
  return synth(t, c);
}

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("PARAM_WORKBENCH_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

namespace {

struct Fuel {
  std::uint64_t left;
  NormalizeStats* stats;
  void burn() {
    if (left == 0) throw FuelExhausted("normalisation ran out of fuel");
    --left;
    if (stats) ++stats->steps;
  }
};

Term whnf(Term t, Fuel& fuel) {
  for (;;) {
    switch (t->kind) {
      case TermKind::App: {
        Term f = whnf(t->a, fuel);
        if (f->kind == TermKind::Lam) {
          fuel.burn();
          t = beta_subst(f->a, t->b);
          continue;
        }
        return f == t->a ? t : app(f, t->b);
      }
      case TermKind::Fst:
      case TermKind::Snd: {
        Term p = whnf(t->a, fuel);
        if (p->kind == TermKind::Pair) {
          fuel.burn();
          t = t->kind == TermKind::Fst ? p->a : p->b;
          continue;
        }
        if (p == t->a) return t;
        return t->kind == TermKind::Fst ? fst(p) : snd(p);
      }
      case TermKind::TyApp: {
        Term f = whnf(t->a, fuel);
        if (f->kind == TermKind::TyLam) {
          fuel.burn();
          t = beta_type_subst(f->a, t->ty);
          continue;
        }
        return f == t->a ? t : tyapp(f, t->ty);
      }
      default: return t;
    }
  }
}

Term nf(const Term& t0, Fuel& fuel) {
  Term t = whnf(t0, fuel);
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Unit: return t;
    case TermKind::Lam: return lam(t->ty, nf(t->a, fuel), t->hint);
    case TermKind::TyLam: return tylam(nf(t->a, fuel), t->hint);
    case TermKind::App: return app(nf(t->a, fuel), nf(t->b, fuel));
    case TermKind::Pair: return pair(nf(t->a, fuel), nf(t->b, fuel));
    case TermKind::Fst: return fst(nf(t->a, fuel));
    case TermKind::Snd: return snd(nf(t->a, fuel));
    case TermKind::TyApp: return tyapp(nf(t->a, fuel), t->ty);
  }
  return t;
}

UTerm uwhnf(UTerm t, Fuel& fuel) {
  for (;;) {
    switch (t->kind) {
      case UKind::App: {
        UTerm f = uwhnf(t->a, fuel);
        if (f->kind == UKind::Lam) {
          fuel.burn();
          t = ubeta_subst(f->a, t->b);
          continue;
        }
        return f == t->a ? t : uapp(f, t->b);
      }
      case UKind::Fst:
      case UKind::Snd: {
        UTerm p = uwhnf(t->a, fuel);
        if (p->kind == UKind::Pair) {
          fuel.burn();
          t = t->kind == UKind::Fst ? p->a : p->b;
          continue;
        }
        if (p == t->a) return t;
        return t->kind == UKind::Fst ? ufst(p) : usnd(p);
      }
      default: return t;
    }
  }
}

UTerm unf(const UTerm& t0, Fuel& fuel) {
  UTerm t = uwhnf(t0, fuel);
  switch (t->kind) {
    case UKind::Var:
    case UKind::Unit: return t;
    case UKind::Lam: return ulam(unf(t->a, fuel), t->hint);
    case UKind::App: return uapp(unf(t->a, fuel), unf(t->b, fuel));
    case UKind::Pair: return upair(unf(t->a, fuel), unf(t->b, fuel));
    case UKind::Fst: return ufst(unf(t->a, fuel));
    case UKind::Snd: return usnd(unf(t->a, fuel));
  }
  return t;
}

bool occurs(const Term& t, int j) {
  switch (t->kind) {
    case TermKind::Var: return t->index == j;
    case TermKind::Unit: return false;
    case TermKind::Lam: return occurs(t->a, j + 1);
    case TermKind::App:
    case TermKind::Pair: return occurs(t->a, j) || occurs(t->b, j);
    default: return occurs(t->a, j);
  }
}

bool tyvar_occurs(const Type& t, int k) {
  switch (t->kind) {
    case TypeKind::Var: return t->index == k;
    case TypeKind::Unit: return false;
    case TypeKind::Forall: return tyvar_occurs(t->a, k + 1);
    default: return tyvar_occurs(t->a, k) || tyvar_occurs(t->b, k);
  }
}

bool tyvar_occurs(const Term& t, int k) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Unit: return false;
    case TermKind::Lam: return tyvar_occurs(t->ty, k) || tyvar_occurs(t->a, k);
    case TermKind::App:
    case TermKind::Pair: return tyvar_occurs(t->a, k) || tyvar_occurs(t->b, k);
    case TermKind::TyLam: return tyvar_occurs(t->a, k + 1);
    case TermKind::TyApp: return tyvar_occurs(t->ty, k) || tyvar_occurs(t->a, k);
    default: return tyvar_occurs(t->a, k);
  }
}

bool uoccurs(const UTerm& t, int j) {
  switch (t->kind) {
    case UKind::Var: return t->index == j;
    case UKind::Unit: return false;
    case UKind::Lam: return uoccurs(t->a, j + 1);
    case UKind::App:
    case UKind::Pair: return uoccurs(t->a, j) || uoccurs(t->b, j);
    default: return uoccurs(t->a, j);
  }
}

}  // namespace

Term normalize(const Term& t, std::uint64_t fuel, NormalizeStats* stats) {
  Fuel f{fuel, stats};
  return nf(t, f);
}

UTerm normalize(const UTerm& t, std::uint64_t fuel, NormalizeStats* stats) {
  Fuel f{fuel, stats};
  return unf(t, f);
}

Term eta_reduce(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Unit: return t;
    case TermKind::Lam: {
      Term body = eta_reduce(t->a);
      // \x. f x  ~>  f   when x is not free in f
      if (body->kind == TermKind::App && body->b->kind == TermKind::Var && body->b->index == 0 && !occurs(body->a, 0))
        return shift_term(body->a, -1, 0);
      return lam(t->ty, body, t->hint);
    }
    case TermKind::TyLam: {
      Term body = eta_reduce(t->a);
      if (body->kind == TermKind::TyApp && body->ty->kind == TypeKind::Var && body->ty->index == 0 &&
          !tyvar_occurs(body->a, 0))
        return shift_tyvars(body->a, -1, 0);
      return tylam(body, t->hint);
    }
    case TermKind::App: return app(eta_reduce(t->a), eta_reduce(t->b));
    case TermKind::Pair: {
      Term a = eta_reduce(t->a), b = eta_reduce(t->b);
      if (a->kind == TermKind::Fst && b->kind == TermKind::Snd && term_equal(a->a, b->a)) return a->a;
      return pair(a, b);
    }
    case TermKind::Fst: return fst(eta_reduce(t->a));
    case TermKind::Snd: return snd(eta_reduce(t->a));
    case TermKind::TyApp: return tyapp(eta_reduce(t->a), t->ty);
  }
  return t;
}

UTerm eta_reduce(const UTerm& t) {
  switch (t->kind) {
    case UKind::Var:
    case UKind::Unit: return t;
    case UKind::Lam: {
      UTerm body = eta_reduce(t->a);
      if (body->kind == UKind::App && body->b->kind == UKind::Var && body->b->index == 0 && !uoccurs(body->a, 0))
        return ushift(body->a, -1, 0);
      return ulam(body, t->hint);
    }
    case UKind::App: return uapp(eta_reduce(t->a), eta_reduce(t->b));
    case UKind::Pair: {
      UTerm a = eta_reduce(t->a), b = eta_reduce(t->b);
      if (a->kind == UKind::Fst && b->kind == UKind::Snd && uterm_equal(a->a, b->a)) return a->a;
      return upair(a, b);
    }
    case UKind::Fst: return ufst(eta_reduce(t->a));
    case UKind::Snd: return usnd(eta_reduce(t->a));
  }
  return t;
}

bool beta_eta_equal(const Term& x, const Term& y, std::uint64_t fuel) {
  return term_equal(eta_reduce(normalize(x, fuel)), eta_reduce(normalize(y, fuel)));
}

UTerm erase(const Term& t) {
  switch (t->kind) {
    case TermKind::Var: return uvar(t->index);
    case TermKind::Unit: return uunit();
    case TermKind::Lam: return ulam(erase(t->a), t->hint);
    case TermKind::App: return uapp(erase(t->a), erase(t->b));
    case TermKind::Pair: return upair(erase(t->a), erase(t->b));
    case TermKind::Fst: return ufst(erase(t->a));
    case TermKind::Snd: return usnd(erase(t->a));
    case TermKind::TyLam:
    case TermKind::TyApp: return erase(t->a);
  }
  return uunit();
}

}  // namespace pwb::sf
