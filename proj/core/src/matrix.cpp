#include "gkz/matrix.hpp"

namespace gkz {

RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

RationalVector multiply(const RationalMatrix& m, std::span<const Rational> v) {
  assert(v.size() == m.cols());
  RationalVector out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

IntegerVector multiply(const IntegerMatrix& m, std::span<const Integer> v) {
  assert(v.size() == m.cols());
  IntegerVector out(m.rows(), Integer(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  assert(a.cols() == b.rows());
  RationalMatrix c(a.rows(), b.cols(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (sgn(a(i, k)) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

std::size_t rank(RationalMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

Rational determinant(RationalMatrix m) {
  assert(m.rows() == m.cols());
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

Integer determinant(const IntegerMatrix& m) {
  const Rational d = determinant(to_rational(m));
  return d.get_num();
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  assert(m.rows() == m.cols());
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return std::nullopt;
    a.swap_rows(p, c);
    inv.swap_rows(p, c);
    const Rational pivot = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= pivot;
      inv(c, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(a(i, c)) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace gkz
