#pragma once

#include <cstddef>
#include <vector>

#include "gkz/polynomial.hpp"
#include "gkz/rational.hpp"

namespace gkz {

// Monomial order given by weight rows compared in turn, with graded reverse
// lexicographic order as the final tiebreak. Rows are stored rescaled to
// integers (positive scaling does not change comparisons).
class MatrixTermOrder {
 public:
  MatrixTermOrder() = default;
  MatrixTermOrder(std::size_t nvars, std::vector<RationalVector> rows);

  static MatrixTermOrder grevlex(std::size_t nvars) { return MatrixTermOrder(nvars, {}); }
  static MatrixTermOrder weight(const RationalVector& w) { return MatrixTermOrder(w.size(), {w}); }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<RationalVector>& rows() const noexcept { return rows_; }

  // Weight values of e under each integer row.
  std::vector<Integer> key(const Exponent& e) const;
  // Compare two exponents given precomputed keys; -1, 0, +1.
  int compare(const std::vector<Integer>& ka, const Exponent& a, const std::vector<Integer>& kb,
              const Exponent& b) const;
  int compare(const Exponent& a, const Exponent& b) const;

  // True when the order is a term order (every variable exceeds 1).
  bool is_well_order() const;

 private:
  std::size_t nvars_ = 0;
  std::vector<RationalVector> rows_;
  std::vector<std::vector<Integer>> int_rows_;
};

int grevlex_compare(const Exponent& a, const Exponent& b);

// w . e
Rational weight_of(const RationalVector& w, const Exponent& e);

}  // namespace gkz
