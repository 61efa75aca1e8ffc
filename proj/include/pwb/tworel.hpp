#pragma once

#include <array>
#include <optional>
#include <vector>

#include "json.hpp"
#include "pwb/finmodel.hpp"

namespace pwb::cube {

using fm::FinFn;
using fm::FinSet;
using fm::Rel;
using fm::RelMor;

// A 2-relation is a square of relations
//
//   A --q0t--> B
//   |          |
//  q1t        q1b
//   v          v
//   C --q0b--> D
//
// with a predicate on compatible corner/witness tuples.
struct Cell {
  std::array<Label, 4> corner;   // a, b, c, d
  std::array<Label, 4> witness;  // p : q0t(a,b), q : q1t(a,c), r : q0b(c,d), s : q1b(b,d)
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class Face2 { ZeroTop, OneTop, ZeroBot, OneBot };
const char* to_string(Face2 f);
constexpr std::array<Face2, 4> kFaces2{Face2::ZeroTop, Face2::OneTop, Face2::ZeroBot, Face2::OneBot};

class TwoRel {
 public:
  TwoRel() = default;
  // Validates the boundary and every cell.
  static TwoRel make(Rel q0t, Rel q1t, Rel q0b, Rel q1b, std::vector<Cell> cells);

  const Rel& edge(Face2 f) const;
  const FinSet& corner(int i) const;  // 0..3 = A, B, C, D
  const std::vector<Cell>& cells() const { return cells_; }
  bool holds(const Cell& c) const;

  std::string str() const;
  friend bool operator==(const TwoRel& x, const TwoRel& y);

 private:
  std::array<Rel, 4> edges_;  // indexed by Face2
  std::vector<Cell> cells_;   // sorted
};

inline const Rel& face2(Face2 f, const TwoRel& q) { return q.edge(f); }

// Degeneracies and connections.
TwoRel eq_h(const Rel& r);      // r on top and bottom
TwoRel eq_v(const Rel& r);      // r on left and right
TwoRel conn_top(const Rel& r);  // r on top and left
TwoRel conn_bot(const Rel& r);  // r on bottom and right
// Reflection across the main diagonal: swaps B and C.
TwoRel transpose(const TwoRel& q);

class TwoRelMor {
 public:
  static TwoRelMor make(TwoRel src, TwoRel tgt, std::array<RelMor, 4> edges);
  static TwoRelMor identity(const TwoRel& q);

  const TwoRel& src() const { return src_; }
  const TwoRel& tgt() const { return tgt_; }
  const RelMor& edge(Face2 f) const { return edges_[static_cast<int>(f)]; }
  const FinFn& corner(int i) const;
  Cell apply(const Cell& c) const;
  bool is_iso() const;

  friend bool operator==(const TwoRelMor& x, const TwoRelMor& y);

 private:
  TwoRel src_, tgt_;
  std::array<RelMor, 4> edges_;
};

TwoRelMor compose(const TwoRelMor& n, const TwoRelMor& m);  // n after m
// Every morphism with the given edge data; nullopt when the predicate is not preserved.
std::optional<TwoRelMor> try_make(const TwoRel& src, const TwoRel& tgt, const std::array<RelMor, 4>& edges);

TwoRelMor eq_h(const RelMor& m);
TwoRelMor eq_v(const RelMor& m);
TwoRelMor conn_top(const RelMor& m);
TwoRelMor conn_bot(const RelMor& m);

// Cartesian structure.
TwoRel terminal2();
TwoRel product(const TwoRel& x, const TwoRel& y);
TwoRel exponential(const TwoRel& x, const TwoRel& y);

nlohmann::json to_json(const TwoRel& q);
TwoRel tworel_from_json(const nlohmann::json& j);

}  // namespace pwb::cube
