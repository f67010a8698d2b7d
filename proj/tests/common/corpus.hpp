#pragma once

#include <random>
#include <vector>

#include "gkz/lattice.hpp"

namespace gkz::testing {

// Deterministic pseudo-random valid matrices: d in {1,2}, n in {2,3,4},
// entries 0..3, no zero column, rank d, columns generating Z^d.
inline std::vector<IntegerPointConfig> corpus(std::size_t count = 20, unsigned seed = 20240607) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(0, 3);
  std::vector<IntegerPointConfig> out;
  std::size_t attempt = 0;
  while (out.size() < count) {
    const std::size_t d = 1 + attempt % 2;
    const std::size_t n = 2 + (attempt / 2) % 3;
    ++attempt;
    if (n < d) continue;
    IntegerMatrix m(d, n);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
    IntegerPointConfig a(m);
    if (a.has_zero_column() || a.rank() < d) continue;
    if (!generates_lattice(a)) continue;
    out.push_back(a);
  }
  return out;
}

inline IntegerPointConfig row_123() { return IntegerPointConfig::from_rows({{1, 2, 3}}); }

}  // namespace gkz::testing
