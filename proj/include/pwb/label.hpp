#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pwb {

enum class LabelKind : std::uint8_t {
  Atom,    // carrier element 0, 1, 2, ...
  Sym,     // named witness such as w or p0
  Star,    // the element of the terminal set
  Tt,      // the witness of the terminal relation
  Pair,
  Refl,    // witness of an equality relation
  Table,   // function table, keys sorted
  Dep,     // dependent table (a1, a2, w) -> witness
  Tuple,
  Family,  // element of a quantified set
};

// Immutable structured label with a canonical order and string form.
// Copies share the underlying node.
class Label {
 public:
  Label();  // the star label

  static Label atom(std::int64_t n);
  static Label sym(std::string_view name);
  static Label star();
  static Label tt();
  static Label pair(Label a, Label b);
  static Label refl(Label x);
  // kv holds key0, value0, key1, value1, ... with keys strictly increasing.
  static Label table(std::vector<Label> kv);
  static Label dep(std::vector<Label> kv);
  static Label tuple(std::vector<Label> xs);
  static Label family(Label f0);

  static Label parse(std::string_view text);

  LabelKind kind() const;
  std::int64_t number() const;
  const std::string& name() const;
  std::span<const Label> children() const;
  const Label& child(std::size_t i) const;
  std::size_t arity() const { return children().size(); }

  // Table and Dep lookup; throws ModelError when the key is absent.
  const Label& lookup(const Label& key) const;
  const Label* find(const Label& key) const;
  std::size_t entry_count() const;
  const Label& key_at(std::size_t i) const { return child(2 * i); }
  const Label& value_at(std::size_t i) const { return child(2 * i + 1); }

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Label& a, const Label& b);
  friend std::strong_ordering operator<=>(const Label& a, const Label& b);

  struct Node;

 private:
  explicit Label(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Label make(LabelKind k, std::int64_t num, std::string text, std::vector<Label> kids);
  void write(std::string& out) const;

  std::shared_ptr<const Node> node_;
};

Label triple(const Label& a, const Label& b, const Label& w);

}  // namespace pwb

template <>
struct std::hash<pwb::Label> {
  std::size_t operator()(const pwb::Label& l) const noexcept { return l.hash(); }
};
