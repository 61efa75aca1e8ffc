#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "pwb/systemf.hpp"

namespace pwb::sf {

SyntaxError::SyntaxError(SourcePos p, const std::string& msg)
    : Error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg), pos(p) {}

TypeError::TypeError(Code c, const std::string& msg) : Error(std::string(to_string(c)) + ": " + msg), code(c) {}

const char* to_string(TypeError::Code c) {
  switch (c) {
    case TypeError::Code::Unbound: return "unbound identifier";
    case TypeError::Code::Mismatch: return "type mismatch";
    case TypeError::Code::NotFunction: return "not a function";
    case TypeError::Code::NotPair: return "not a pair";
    case TypeError::Code::NotForall: return "not a polymorphic term";
    case TypeError::Code::IllScoped: return "ill-scoped type";
  }
  return "type error";
}

namespace {

enum class Tok { Ident, Lambda, BigLambda, Arrow, Star, Dot, LParen, RParen, Comma, LBrack, RBrack, Colon, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view src, int first_line) {
  std::vector<Token> out;
  int line = first_line, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    SourcePos pos{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '\\') {
      out.push_back({Tok::BigLambda, "/\\", pos});
      advance(2);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", pos});
      advance(2);
    } else {
      Tok k;
      switch (c) {
        case '\\': k = Tok::Lambda; break;
        case '*': k = Tok::Star; break;
        case '.': k = Tok::Dot; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case '[': k = Tok::LBrack; break;
        case ']': k = Tok::RBrack; break;
        case ':': k = Tok::Colon; break;
        case '=': k = Tok::Equals; break;
        default: throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
      }
      out.push_back({k, std::string(1, c), pos});
      advance(1);
    }
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

const char* describe(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Lambda: return "'\\'";
    case Tok::BigLambda: return "'/\\'";
    case Tok::Arrow: return "'->'";
    case Tok::Star: return "'*'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_reserved(const std::string& s) { return s == "unit" || s == "forall" || s == "fst" || s == "snd"; }

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::map<std::string, Term>* globals)
      : toks_(std::move(toks)), globals_(globals) {}

  Type type_only() {
    Type t = type();
    expect(Tok::End);
    return t;
  }

  Term term_only() {
    Term t = term();
    expect(Tok::End);
    return t;
  }

  Definition definition() {
    Definition d;
    d.line = peek().pos.line;
    d.name = binder_name();
    expect(Tok::Colon);
    d.declared = type();
    expect(Tok::Equals);
    d.term = term();
    expect(Tok::End);
    return d;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(peek().pos, msg); }

  Token expect(Tok k) {
    if (!at(k)) fail(std::string("expected ") + describe(k) + ", found " + (at(Tok::End) ? "end of input" : "'" + peek().text + "'"));
    return take();
  }

  std::string binder_name() {
    Token t = expect(Tok::Ident);
    if (is_reserved(t.text)) throw SyntaxError(t.pos, "'" + t.text + "' is reserved");
    return t.text;
  }

  static std::string where(SourcePos p) { return " at " + std::to_string(p.line) + ":" + std::to_string(p.col); }

  Type type() {
    if (at_word("forall")) {
      take();
      std::string n = binder_name();
      expect(Tok::Dot);
      tv_.push_back(n);
      Type body = type();
      tv_.pop_back();
      return tforall(body, n);
    }
    Type lhs = prod_type();
    if (at(Tok::Arrow)) {
      take();
      return tarrow(lhs, type());
    }
    return lhs;
  }

  Type prod_type() {
    Type lhs = atom_type();
    if (at(Tok::Star)) {
      take();
      return tprod(lhs, prod_type());
    }
    return lhs;
  }

  Type atom_type() {
    if (at(Tok::LParen)) {
      take();
      Type t = type();
      expect(Tok::RParen);
      return t;
    }
    if (at_word("unit")) {
      take();
      return tunit();
    }
    if (at_word("forall")) fail("'forall' must be parenthesised here");
    Token t = expect(Tok::Ident);
    for (std::size_t k = tv_.size(); k-- > 0;)
      if (tv_[k] == t.text) return tvar(static_cast<int>(tv_.size() - 1 - k));
    throw TypeError(TypeError::Code::Unbound, "type variable '" + t.text + "'" + where(t.pos));
  }

  Term term() {
    if (at(Tok::Lambda)) {
      take();
      std::string n = binder_name();
      expect(Tok::Colon);
      Type ty = type();
      expect(Tok::Dot);
      xv_.push_back(n);
      Term body = term();
      xv_.pop_back();
      return lam(ty, body, n);
    }
    if (at(Tok::BigLambda)) {
      take();
      std::string n = binder_name();
      expect(Tok::Dot);
      tv_.push_back(n);
      // term variables keep their indices; their types now live one level deeper
      Term body = term();
      tv_.pop_back();
      return tylam(body, n);
    }
    return application();
  }

  bool starts_atom() const {
    if (at(Tok::LParen)) return true;
    return at(Tok::Ident) && !is_reserved(peek().text);
  }

  Term application() {
    Term cur = head();
    for (;;) {
      if (at(Tok::LBrack)) {
        take();
        Type ty = type();
        expect(Tok::RBrack);
        cur = tyapp(cur, ty);
      } else if (starts_atom()) {
        cur = app(cur, atom());
      } else if (at(Tok::Lambda) || at(Tok::BigLambda)) {
        cur = app(cur, term());
        break;
      } else {
        break;
      }
    }
    return cur;
  }

  Term head() {
    if (at_word("fst")) {
      take();
      return fst(atom());
    }
    if (at_word("snd")) {
      take();
      return snd(atom());
    }
    return atom();
  }

  Term atom() {
    if (at(Tok::LParen)) {
      take();
      if (at(Tok::RParen)) {
        take();
        return unit();
      }
      Term a = term();
      if (at(Tok::Comma)) {
        take();
        Term b = term();
        expect(Tok::RParen);
        return pair(a, b);
      }
      expect(Tok::RParen);
      return a;
    }
    if (!at(Tok::Ident)) fail(std::string("expected a term, found ") + (at(Tok::End) ? "end of input" : "'" + peek().text + "'"));
    Token t = take();
    if (is_reserved(t.text)) throw SyntaxError(t.pos, "unexpected '" + t.text + "'");
    for (std::size_t k = xv_.size(); k-- > 0;)
      if (xv_[k] == t.text) return var(static_cast<int>(xv_.size() - 1 - k));
    if (globals_) {
      auto it = globals_->find(t.text);
      if (it != globals_->end()) return it->second;
    }
    throw TypeError(TypeError::Code::Unbound, "variable '" + t.text + "'" + where(t.pos));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::map<std::string, Term>* globals_;
  std::vector<std::string> tv_, xv_;
};

}  // namespace

Type parse_type(std::string_view src) { return Parser(lex(src, 1), nullptr).type_only(); }

Term parse_term(std::string_view src) { return Parser(lex(src, 1), nullptr).term_only(); }

std::vector<Definition> parse_program(std::string_view src) {
  std::vector<Definition> defs;
  std::map<std::string, Term> globals;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= src.size()) {
    std::size_t end = src.find('\n', start);
    if (end == std::string_view::npos) end = src.size();
    ++line_no;
    std::string_view line = src.substr(start, end - start);
    auto toks = lex(line, line_no);
    if (toks.size() > 1) {
      Definition d = Parser(std::move(toks), &globals).definition();
      if (globals.count(d.name)) throw SyntaxError({d.line, 1}, "duplicate definition '" + d.name + "'");
      globals[d.name] = d.term;
      defs.push_back(std::move(d));
    }
    start = end + 1;
  }
  return defs;
}

std::vector<Definition> load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

}  // namespace pwb::sf
