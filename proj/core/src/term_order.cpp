#include "gkz/term_order.hpp"

#include <algorithm>

#include "gkz/errors.hpp"

namespace gkz {

MatrixTermOrder::MatrixTermOrder(std::size_t nvars, std::vector<RationalVector> rows)
    : nvars_(nvars), rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.size() != nvars_) throw ValidationError("term_order", "weight row has the wrong length");
    Integer scale = lcm_of_denominators(r);
    std::vector<Integer> ir(nvars_);
    for (std::size_t j = 0; j < nvars_; ++j) {
      Rational v = r[j] * scale;
      ir[j] = v.get_num();
    }
    int_rows_.push_back(std::move(ir));
  }
}

std::vector<Integer> MatrixTermOrder::key(const Exponent& e) const {
  std::vector<Integer> k(int_rows_.size());
  for (std::size_t r = 0; r < int_rows_.size(); ++r) {
    Integer s = 0;
    for (std::size_t j = 0; j < nvars_; ++j)
      if (e[j] != 0 && int_rows_[r][j] != 0) s += int_rows_[r][j] * e[j];
    k[r] = std::move(s);
  }
  return k;
}

int grevlex_compare(const Exponent& a, const Exponent& b) {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t j = a.size(); j-- > 0;) {
    if (a[j] != b[j]) return a[j] < b[j] ? 1 : -1;
  }
  return 0;
}

int MatrixTermOrder::compare(const std::vector<Integer>& ka, const Exponent& a, const std::vector<Integer>& kb,
                             const Exponent& b) const {
  for (std::size_t r = 0; r < ka.size(); ++r) {
    int c = cmp(ka[r], kb[r]);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  return grevlex_compare(a, b);
}

int MatrixTermOrder::compare(const Exponent& a, const Exponent& b) const { return compare(key(a), a, key(b), b); }

bool MatrixTermOrder::is_well_order() const {
  // Every variable must be lexicographically nonnegative across the rows;
  // then all monomials exceed 1 and Dickson's lemma does the rest.
  for (std::size_t j = 0; j < nvars_; ++j) {
    for (const auto& r : int_rows_) {
      if (r[j] < 0) return false;
      if (r[j] > 0) break;
    }
  }
  return true;
}

Rational weight_of(const RationalVector& w, const Exponent& e) {
  Rational s = 0;
  for (std::size_t j = 0; j < e.size(); ++j)
    if (e[j] != 0) s += w[j] * e[j];
  return s;
}

}  // namespace gkz
