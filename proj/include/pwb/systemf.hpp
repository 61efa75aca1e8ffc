#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwb/error.hpp"

namespace pwb::sf {

// ---- types (de Bruijn indices, binder names kept only as printing hints)

enum class TypeKind { Var, Unit, Arrow, Prod, Forall };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TypeKind kind;
  int index = 0;  // Var
  Type a, b;      // Arrow/Prod: a, b; Forall: a is the body
  std::string hint;
};

Type tvar(int i);
Type tunit();
Type tarrow(Type a, Type b);
Type tprod(Type a, Type b);
Type tforall(Type body, std::string hint = "a");

bool type_equal(const Type& x, const Type& y);
Type shift_type(const Type& t, int d, int cutoff = 0);
// Replaces variable 0 of body by s and lowers the remaining free variables.
Type subst_type(const Type& body, const Type& s);
// Smallest n such that every free variable index is below n.
int type_free_bound(const Type& t);
bool is_closed(const Type& t);

// ---- terms

enum class TermKind { Var, Lam, App, Pair, Fst, Snd, Unit, TyLam, TyApp };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TermKind kind;
  int index = 0;  // Var
  Type ty;        // Lam annotation, TyApp argument
  Term a, b;
  std::string hint;
};

Term var(int i);
Term lam(Type ty, Term body, std::string hint = "x");
Term app(Term f, Term a);
Term pair(Term a, Term b);
Term fst(Term p);
Term snd(Term p);
Term unit();
Term tylam(Term body, std::string hint = "a");
Term tyapp(Term t, Type ty);

bool term_equal(const Term& x, const Term& y);
std::size_t term_size(const Term& t);

// ---- untyped terms

enum class UKind { Var, Lam, App, Pair, Fst, Snd, Unit };

struct UNode;
using UTerm = std::shared_ptr<const UNode>;

struct UNode {
  UKind kind;
  int index = 0;
  UTerm a, b;
  std::string hint;
};

UTerm uvar(int i);
UTerm ulam(UTerm body, std::string hint = "x");
UTerm uapp(UTerm f, UTerm a);
UTerm upair(UTerm a, UTerm b);
UTerm ufst(UTerm p);
UTerm usnd(UTerm p);
UTerm uunit();

bool uterm_equal(const UTerm& x, const UTerm& y);

// ---- errors

struct SourcePos {
  int line = 1;
  int col = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, const std::string& msg);
  SourcePos pos;
};

class TypeError : public Error {
 public:
  enum class Code { Unbound, Mismatch, NotFunction, NotPair, NotForall, IllScoped };
  TypeError(Code code, const std::string& msg);
  Code code;
};

const char* to_string(TypeError::Code c);

// ---- parsing and printing

Type parse_type(std::string_view src);
Term parse_term(std::string_view src);

struct Definition {
  std::string name;
  Type declared;
  Term term;
  int line = 0;
};

// One `name : T = t` per line; `--` starts a comment. A definition may refer
// to earlier definitions by name, which are inlined.
std::vector<Definition> parse_program(std::string_view src);
std::vector<Definition> load_program(const std::string& path);

std::string pretty(const Type& t);
std::string pretty(const Term& t);
std::string pretty(const UTerm& t);

// ---- typing

struct Context {
  int type_depth = 0;
  std::vector<Type> vars;  // index 0 is the innermost binding (vars.back())
};

Type type_of(const Term& t, const Context& ctx = {});
bool well_formed(const Type& t, int depth);

// ---- evaluation

std::uint64_t default_fuel();  // 10^6 unless PARAM_WORKBENCH_FUEL is set

struct NormalizeStats {
  std::uint64_t steps = 0;
};

// Normal-order beta normalisation; throws FuelExhausted.
Term normalize(const Term& t, std::uint64_t fuel = default_fuel(), NormalizeStats* stats = nullptr);
UTerm normalize(const UTerm& t, std::uint64_t fuel = default_fuel(), NormalizeStats* stats = nullptr);

Term eta_reduce(const Term& t);
UTerm eta_reduce(const UTerm& t);
bool beta_eta_equal(const Term& x, const Term& y, std::uint64_t fuel = default_fuel());

UTerm erase(const Term& t);

}  // namespace pwb::sf
