#include <algorithm>
#include <set>

#include "pwb/systemf.hpp"
#include "systemf/internal.hpp"

namespace pwb::sf {

Type tvar(int i) { return std::make_shared<TypeNode>(TypeNode{TypeKind::Var, i, nullptr, nullptr, {}}); }
Type tunit() {
  static const Type u = std::make_shared<TypeNode>(TypeNode{TypeKind::Unit, 0, nullptr, nullptr, {}});
  return u;
}
Type tarrow(Type a, Type b) {
  return std::make_shared<TypeNode>(TypeNode{TypeKind::Arrow, 0, std::move(a), std::move(b), {}});
}
Type tprod(Type a, Type b) {
  return std::make_shared<TypeNode>(TypeNode{TypeKind::Prod, 0, std::move(a), std::move(b), {}});
}
Type tforall(Type body, std::string hint) {
  return std::make_shared<TypeNode>(TypeNode{TypeKind::Forall, 0, std::move(body), nullptr, std::move(hint)});
}

bool type_equal(const Type& x, const Type& y) {
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::Var: return x->index == y->index;
    case TypeKind::Unit: return true;
    case TypeKind::Arrow:
    case TypeKind::Prod: return type_equal(x->a, y->a) && type_equal(x->b, y->b);
    case TypeKind::Forall: return type_equal(x->a, y->a);
  }
  return false;
}

Type shift_type(const Type& t, int d, int cutoff) {
  switch (t->kind) {
    case TypeKind::Var: return t->index >= cutoff ? tvar(t->index + d) : t;
    case TypeKind::Unit: return t;
    case TypeKind::Arrow: return tarrow(shift_type(t->a, d, cutoff), shift_type(t->b, d, cutoff));
    case TypeKind::Prod: return tprod(shift_type(t->a, d, cutoff), shift_type(t->b, d, cutoff));
    case TypeKind::Forall: return tforall(shift_type(t->a, d, cutoff + 1), t->hint);
  }
  return t;
}

Type subst_type_at(const Type& t, int k, const Type& s) {
  switch (t->kind) {
    case TypeKind::Var:
      if (t->index == k) return shift_type(s, k, 0);
      if (t->index > k) return tvar(t->index - 1);
      return t;
    case TypeKind::Unit: return t;
    case TypeKind::Arrow: return tarrow(subst_type_at(t->a, k, s), subst_type_at(t->b, k, s));
    case TypeKind::Prod: return tprod(subst_type_at(t->a, k, s), subst_type_at(t->b, k, s));
    case TypeKind::Forall: return tforall(subst_type_at(t->a, k + 1, s), t->hint);
  }
  return t;
}

Type subst_type(const Type& body, const Type& s) { return subst_type_at(body, 0, s); }

int type_free_bound(const Type& t) {
  switch (t->kind) {
    case TypeKind::Var: return t->index + 1;
    case TypeKind::Unit: return 0;
    case TypeKind::Arrow:
    case TypeKind::Prod: return std::max(type_free_bound(t->a), type_free_bound(t->b));
    case TypeKind::Forall: return std::max(0, type_free_bound(t->a) - 1);
  }
  return 0;
}

bool is_closed(const Type& t) { return type_free_bound(t) == 0; }

// ---- terms

static Term mk(TermKind k, int index, Type ty, Term a, Term b, std::string hint = {}) {
  return std::make_shared<TermNode>(TermNode{k, index, std::move(ty), std::move(a), std::move(b), std::move(hint)});
}

Term var(int i) { return mk(TermKind::Var, i, nullptr, nullptr, nullptr); }
Term lam(Type ty, Term body, std::string hint) { return mk(TermKind::Lam, 0, std::move(ty), std::move(body), nullptr, std::move(hint)); }
Term app(Term f, Term a) { return mk(TermKind::App, 0, nullptr, std::move(f), std::move(a)); }
Term pair(Term a, Term b) { return mk(TermKind::Pair, 0, nullptr, std::move(a), std::move(b)); }
Term fst(Term p) { return mk(TermKind::Fst, 0, nullptr, std::move(p), nullptr); }
Term snd(Term p) { return mk(TermKind::Snd, 0, nullptr, std::move(p), nullptr); }
Term unit() {
  static const Term u = mk(TermKind::Unit, 0, nullptr, nullptr, nullptr);
  return u;
}
Term tylam(Term body, std::string hint) { return mk(TermKind::TyLam, 0, nullptr, std::move(body), nullptr, std::move(hint)); }
Term tyapp(Term t, Type ty) { return mk(TermKind::TyApp, 0, std::move(ty), std::move(t), nullptr); }

bool term_equal(const Term& x, const Term& y) {
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TermKind::Var: return x->index == y->index;
    case TermKind::Unit: return true;
    case TermKind::Lam: return type_equal(x->ty, y->ty) && term_equal(x->a, y->a);
    case TermKind::App:
    case TermKind::Pair: return term_equal(x->a, y->a) && term_equal(x->b, y->b);
    case TermKind::Fst:
    case TermKind::Snd:
    case TermKind::TyLam: return term_equal(x->a, y->a);
    case TermKind::TyApp: return type_equal(x->ty, y->ty) && term_equal(x->a, y->a);
  }
  return false;
}

std::size_t term_size(const Term& t) {
  if (!t) return 0;
  return 1 + term_size(t->a) + term_size(t->b);
}

Term shift_term(const Term& t, int d, int cutoff) {
  switch (t->kind) {
    case TermKind::Var: return t->index >= cutoff ? var(t->index + d) : t;
    case TermKind::Unit: return t;
    case TermKind::Lam: return lam(t->ty, shift_term(t->a, d, cutoff + 1), t->hint);
    case TermKind::App: return app(shift_term(t->a, d, cutoff), shift_term(t->b, d, cutoff));
    case TermKind::Pair: return pair(shift_term(t->a, d, cutoff), shift_term(t->b, d, cutoff));
    case TermKind::Fst: return fst(shift_term(t->a, d, cutoff));
    case TermKind::Snd: return snd(shift_term(t->a, d, cutoff));
    case TermKind::TyLam: return tylam(shift_term(t->a, d, cutoff), t->hint);
    case TermKind::TyApp: return tyapp(shift_term(t->a, d, cutoff), t->ty);
  }
  return t;
}

Term shift_tyvars(const Term& t, int d, int cutoff) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Unit: return t;
    case TermKind::Lam: return lam(shift_type(t->ty, d, cutoff), shift_tyvars(t->a, d, cutoff), t->hint);
    case TermKind::App: return app(shift_tyvars(t->a, d, cutoff), shift_tyvars(t->b, d, cutoff));
    case TermKind::Pair: return pair(shift_tyvars(t->a, d, cutoff), shift_tyvars(t->b, d, cutoff));
    case TermKind::Fst: return fst(shift_tyvars(t->a, d, cutoff));
    case TermKind::Snd: return snd(shift_tyvars(t->a, d, cutoff));
    case TermKind::TyLam: return tylam(shift_tyvars(t->a, d, cutoff + 1), t->hint);
    case TermKind::TyApp: return tyapp(shift_tyvars(t->a, d, cutoff), shift_type(t->ty, d, cutoff));
  }
  return t;
}

namespace {

Term subst_term_at(const Term& t, int j, int k, const Term& s) {
  switch (t->kind) {
    case TermKind::Var:
      if (t->index == j) return shift_term(shift_tyvars(s, k, 0), j, 0);
      if (t->index > j) return var(t->index - 1);
      return t;
    case TermKind::Unit: return t;
    case TermKind::Lam: return lam(t->ty, subst_term_at(t->a, j + 1, k, s), t->hint);
    case TermKind::App: return app(subst_term_at(t->a, j, k, s), subst_term_at(t->b, j, k, s));
    case TermKind::Pair: return pair(subst_term_at(t->a, j, k, s), subst_term_at(t->b, j, k, s));
    case TermKind::Fst: return fst(subst_term_at(t->a, j, k, s));
    case TermKind::Snd: return snd(subst_term_at(t->a, j, k, s));
    case TermKind::TyLam: return tylam(subst_term_at(t->a, j, k + 1, s), t->hint);
    case TermKind::TyApp: return tyapp(subst_term_at(t->a, j, k, s), t->ty);
  }
  return t;
}

Term subst_tyvar_at(const Term& t, int k, const Type& s) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Unit: return t;
    case TermKind::Lam: return lam(subst_type_at(t->ty, k, s), subst_tyvar_at(t->a, k, s), t->hint);
    case TermKind::App: return app(subst_tyvar_at(t->a, k, s), subst_tyvar_at(t->b, k, s));
    case TermKind::Pair: return pair(subst_tyvar_at(t->a, k, s), subst_tyvar_at(t->b, k, s));
    case TermKind::Fst: return fst(subst_tyvar_at(t->a, k, s));
    case TermKind::Snd: return snd(subst_tyvar_at(t->a, k, s));
    case TermKind::TyLam: return tylam(subst_tyvar_at(t->a, k + 1, s), t->hint);
    case TermKind::TyApp: return tyapp(subst_tyvar_at(t->a, k, s), subst_type_at(t->ty, k, s));
  }
  return t;
}

}  // namespace

Term beta_subst(const Term& body, const Term& arg) { return subst_term_at(body, 0, 0, arg); }
Term beta_type_subst(const Term& body, const Type& arg) { return subst_tyvar_at(body, 0, arg); }

// ---- untyped terms

static UTerm umk(UKind k, int index, UTerm a, UTerm b, std::string hint = {}) {
  return std::make_shared<UNode>(UNode{k, index, std::move(a), std::move(b), std::move(hint)});
}

UTerm uvar(int i) { return umk(UKind::Var, i, nullptr, nullptr); }
UTerm ulam(UTerm body, std::string hint) { return umk(UKind::Lam, 0, std::move(body), nullptr, std::move(hint)); }
UTerm uapp(UTerm f, UTerm a) { return umk(UKind::App, 0, std::move(f), std::move(a)); }
UTerm upair(UTerm a, UTerm b) { return umk(UKind::Pair, 0, std::move(a), std::move(b)); }
UTerm ufst(UTerm p) { return umk(UKind::Fst, 0, std::move(p), nullptr); }
UTerm usnd(UTerm p) { return umk(UKind::Snd, 0, std::move(p), nullptr); }
UTerm uunit() {
  static const UTerm u = umk(UKind::Unit, 0, nullptr, nullptr);
  return u;
}

bool uterm_equal(const UTerm& x, const UTerm& y) {
  if (x == y) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case UKind::Var: return x->index == y->index;
    case UKind::Unit: return true;
    case UKind::Lam:
    case UKind::Fst:
    case UKind::Snd: return uterm_equal(x->a, y->a);
    case UKind::App:
    case UKind::Pair: return uterm_equal(x->a, y->a) && uterm_equal(x->b, y->b);
  }
  return false;
}

UTerm ushift(const UTerm& t, int d, int cutoff) {
  switch (t->kind) {
    case UKind::Var: return t->index >= cutoff ? uvar(t->index + d) : t;
    case UKind::Unit: return t;
    case UKind::Lam: return ulam(ushift(t->a, d, cutoff + 1), t->hint);
    case UKind::App: return uapp(ushift(t->a, d, cutoff), ushift(t->b, d, cutoff));
    case UKind::Pair: return upair(ushift(t->a, d, cutoff), ushift(t->b, d, cutoff));
    case UKind::Fst: return ufst(ushift(t->a, d, cutoff));
    case UKind::Snd: return usnd(ushift(t->a, d, cutoff));
  }
  return t;
}

static UTerm usubst_at(const UTerm& t, int j, const UTerm& s) {
  switch (t->kind) {
    case UKind::Var:
      if (t->index == j) return ushift(s, j, 0);
      if (t->index > j) return uvar(t->index - 1);
      return t;
    case UKind::Unit: return t;
    case UKind::Lam: return ulam(usubst_at(t->a, j + 1, s), t->hint);
    case UKind::App: return uapp(usubst_at(t->a, j, s), usubst_at(t->b, j, s));
    case UKind::Pair: return upair(usubst_at(t->a, j, s), usubst_at(t->b, j, s));
    case UKind::Fst: return ufst(usubst_at(t->a, j, s));
    case UKind::Snd: return usnd(usubst_at(t->a, j, s));
  }
  return t;
}

UTerm ubeta_subst(const UTerm& body, const UTerm& arg) { return usubst_at(body, 0, arg); }

// ---- printing

namespace {

bool is_keyword(const std::string& s) { return s == "unit" || s == "forall" || s == "fst" || s == "snd"; }

std::string fresh(const std::vector<std::string>& scope, std::string hint, const char* fallback) {
  if (hint.empty() || is_keyword(hint)) hint = fallback;
  std::string name = hint;
  for (int n = 1; std::find(scope.begin(), scope.end(), name) != scope.end(); ++n) name = hint + std::to_string(n);
  return name;
}

std::string name_of(const std::vector<std::string>& scope, int index, char prefix) {
  int pos = static_cast<int>(scope.size()) - 1 - index;
  if (pos < 0) return std::string(1, prefix) + "_free" + std::to_string(-pos - 1);
  return scope[static_cast<std::size_t>(pos)];
}

// Precedence levels: 0 = forall/arrow position, 1 = product operand, 2 = atom.
void print_type(std::string& out, const Type& t, std::vector<std::string>& tv, int prec) {
  switch (t->kind) {
    case TypeKind::Var: out += name_of(tv, t->index, 'T'); return;
    case TypeKind::Unit: out += "unit"; return;
    case TypeKind::Forall: {
      if (prec > 0) out += '(';
      std::string n = fresh(tv, t->hint, "a");
      out += "forall " + n + ". ";
      tv.push_back(n);
      print_type(out, t->a, tv, 0);
      tv.pop_back();
      if (prec > 0) out += ')';
      return;
    }
    case TypeKind::Arrow:
      if (prec > 0) out += '(';
      print_type(out, t->a, tv, 1);
      out += " -> ";
      print_type(out, t->b, tv, 0);
      if (prec > 0) out += ')';
      return;
    case TypeKind::Prod:
      if (prec > 1) out += '(';
      print_type(out, t->a, tv, 2);
      out += " * ";
      print_type(out, t->b, tv, 1);
      if (prec > 1) out += ')';
      return;
  }
}

// Term precedence: 0 = binder allowed, 1 = application head, 2 = atom.
void print_term(std::string& out, const Term& t, std::vector<std::string>& xv, std::vector<std::string>& tv, int prec) {
  switch (t->kind) {
    case TermKind::Var: out += name_of(xv, t->index, 'x'); return;
    case TermKind::Unit: out += "()"; return;
    case TermKind::Pair:
      out += '(';
      print_term(out, t->a, xv, tv, 0);
      out += ", ";
      print_term(out, t->b, xv, tv, 0);
      out += ')';
      return;
    case TermKind::Lam: {
      if (prec > 0) out += '(';
      std::string n = fresh(xv, t->hint, "x");
      out += "\\" + n + " : ";
      print_type(out, t->ty, tv, 0);
      out += ". ";
      xv.push_back(n);
      print_term(out, t->a, xv, tv, 0);
      xv.pop_back();
      if (prec > 0) out += ')';
      return;
    }
    case TermKind::TyLam: {
      if (prec > 0) out += '(';
      std::string n = fresh(tv, t->hint, "a");
      out += "/\\" + n + ". ";
      tv.push_back(n);
      print_term(out, t->a, xv, tv, 0);
      tv.pop_back();
      if (prec > 0) out += ')';
      return;
    }
    case TermKind::App:
      if (prec > 1) out += '(';
      print_term(out, t->a, xv, tv, 1);
      out += ' ';
      print_term(out, t->b, xv, tv, 2);
      if (prec > 1) out += ')';
      return;
    case TermKind::Fst:
    case TermKind::Snd:
      if (prec > 1) out += '(';
      out += t->kind == TermKind::Fst ? "fst " : "snd ";
      print_term(out, t->a, xv, tv, 2);
      if (prec > 1) out += ')';
      return;
    case TermKind::TyApp:
      if (prec > 1) out += '(';
      print_term(out, t->a, xv, tv, 1);
      out += " [";
      print_type(out, t->ty, tv, 0);
      out += ']';
      if (prec > 1) out += ')';
      return;
  }
}

void print_uterm(std::string& out, const UTerm& t, std::vector<std::string>& xv, int prec) {
  switch (t->kind) {
    case UKind::Var: out += name_of(xv, t->index, 'v'); return;
    case UKind::Unit: out += "()"; return;
    case UKind::Pair:
      out += '(';
      print_uterm(out, t->a, xv, 0);
      out += ", ";
      print_uterm(out, t->b, xv, 0);
      out += ')';
      return;
    case UKind::Lam: {
      if (prec > 0) out += '(';
      std::string n = fresh(xv, t->hint, "x");
      out += "\\" + n + ". ";
      xv.push_back(n);
      print_uterm(out, t->a, xv, 0);
      xv.pop_back();
      if (prec > 0) out += ')';
      return;
    }
    case UKind::App:
      if (prec > 1) out += '(';
      print_uterm(out, t->a, xv, 1);
      out += ' ';
      print_uterm(out, t->b, xv, 2);
      if (prec > 1) out += ')';
      return;
    case UKind::Fst:
    case UKind::Snd:
      if (prec > 1) out += '(';
      out += t->kind == UKind::Fst ? "fst " : "snd ";
      print_uterm(out, t->a, xv, 2);
      if (prec > 1) out += ')';
      return;
  }
}

}  // namespace

std::string pretty(const Type& t) {
  std::string out;
  std::vector<std::string> tv;
  print_type(out, t, tv, 0);
  return out;
}

std::string pretty(const Term& t) {
  std::string out;
  std::vector<std::string> xv, tv;
  print_term(out, t, xv, tv, 0);
  return out;
}

std::string pretty(const UTerm& t) {
  std::string out;
  std::vector<std::string> xv;
  print_uterm(out, t, xv, 0);
  return out;
}

}  // namespace pwb::sf
