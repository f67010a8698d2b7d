#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "gkz/rational.hpp"

namespace gkz {

// Dense row-major matrix with value semantics. Only what the exact
// algorithms in this library need.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < m.rows_; ++i) {
      assert(rows[i].size() == m.cols_);
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> row_vector(std::size_t i) const {
    return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_};
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Columns listed in `indices`, in that order.
  Matrix select_columns(std::span<const std::size_t> indices) const {
    Matrix s(rows_, indices.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < indices.size(); ++k) s(i, k) = (*this)(i, indices[k]);
    return s;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

RationalMatrix to_rational(const IntegerMatrix& m);
RationalVector multiply(const RationalMatrix& m, std::span<const Rational> v);
IntegerVector multiply(const IntegerMatrix& m, std::span<const Integer> v);
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);

std::size_t rank(RationalMatrix m);
Rational determinant(RationalMatrix m);
Integer determinant(const IntegerMatrix& m);  // exact, via rationals

// Inverse of a square matrix; nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

}  // namespace gkz
