#pragma once

#include <functional>
#include <vector>

#include "pwb/fibration.hpp"

namespace oracle {

using pwb::fib::ProbeUniverse;
using pwb::fm::Rel;

using Table = std::vector<std::size_t>;  // function on {0..n-1}^arity, row-major

// Brute-force count of families (f_A)_A of `arity`-ary operations on the probe objects
// that preserve every probe relation. Candidates are first filtered by the relations
// from an object to itself.
inline std::size_t count_families(const ProbeUniverse& u, int arity) {
  std::size_t k = u.objs0.size();
  std::vector<std::vector<Table>> cands(k);
  auto preserves = [&](const Rel& r, const Table& f, std::size_t nf, const Table& g, std::size_t ng) {
    // every tuple of related pairs maps to a related pair
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rel;
    for (const auto& e : r.entries()) rel.emplace_back(e.a, e.b);
    std::vector<std::size_t> pick(static_cast<std::size_t>(arity), 0);
    if (rel.empty()) return true;
    for (;;) {
      std::size_t xf = 0, xg = 0;
      for (auto p : pick) {
        xf = xf * nf + rel[p].first;
        xg = xg * ng + rel[p].second;
      }
      if (!r.related(r.dom().at(f[xf]), r.cod().at(g[xg]))) return false;
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == rel.size()) pick[i++] = 0;
      if (i == pick.size()) return true;
    }
  };
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t n = u.objs0[i].size(), dom = 1;
    for (int a = 0; a < arity; ++a) dom *= n;
    Table f(dom, 0);
    for (;;) {
      bool ok = true;
      for (const auto& r : u.objs1)
        if (r.dom() == u.objs0[i] && r.cod() == u.objs0[i] && !preserves(r, f, n, f, n)) ok = false;
      if (ok) cands[i].push_back(f);
      std::size_t j = 0;
      while (j < dom && ++f[j] == n) f[j++] = 0;
      if (j == dom) break;
    }
  }
  std::size_t count = 0;
  std::vector<std::size_t> choice(k, 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == k) {
      for (const auto& r : u.objs1) {
        std::size_t a = *u.index0(r.dom()), b = *u.index0(r.cod());
        if (!preserves(r, cands[a][choice[a]], r.dom().size(), cands[b][choice[b]], r.cod().size())) return;
      }
      ++count;
      return;
    }
    for (choice[i] = 0; choice[i] < cands[i].size(); ++choice[i]) go(i + 1);
  };
  go(0);
  return count;
}

}  // namespace oracle
