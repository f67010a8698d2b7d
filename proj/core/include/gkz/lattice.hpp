#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gkz/matrix.hpp"
#include "gkz/rational.hpp"

namespace gkz {

// Index sets are 0-based internally; text and JSON output is 1-based.
using IndexSet = std::vector<std::size_t>;

// The d x n integer matrix A whose columns are the points a_1..a_n.
class IntegerPointConfig {
 public:
  IntegerPointConfig() = default;
  explicit IntegerPointConfig(IntegerMatrix entries);
  static IntegerPointConfig from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t d() const noexcept { return entries_.rows(); }
  std::size_t n() const noexcept { return entries_.cols(); }
  const IntegerMatrix& matrix() const noexcept { return entries_; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
  IntegerVector column(std::size_t j) const { return entries_.column(j); }

  // Some row equals (1, ..., 1).
  bool is_homogeneous() const;
  bool has_zero_column() const;
  std::size_t rank() const;

  // Throws ValidationError unless: no zero column, rank d, columns generate Z^d.
  void validate() const;

  friend bool operator==(const IntegerPointConfig&, const IntegerPointConfig&) = default;

 private:
  IntegerMatrix entries_;
};

// Nonzero invariant factors of the Smith normal form, in divisibility order.
IntegerVector smith_invariants(IntegerMatrix m);

// Row-style Hermite normal form of the lattice spanned by the rows of
// `generators`: upper echelon, positive pivots, entries above each pivot
// reduced into [0, pivot). Zero rows are dropped.
IntegerMatrix hermite_normal_form(IntegerMatrix generators);

// Basis of ker(A : Z^n -> Z^d), one kernel vector per row, in Hermite form.
IntegerMatrix integer_kernel(const IntegerMatrix& a);

// True iff the columns generate Z^d. Throws ValidationError when rank < d.
bool generates_lattice(const IntegerPointConfig& a);

// The (d+1) x (n+1) matrix with a leading row of ones, A below it, and the
// extra column (1, 0, ..., 0).
IntegerPointConfig homogenize(const IntegerPointConfig& a);

// Rational basis of ker(A : Q^n -> Q^d) normalized to the identity on the
// rows outside `simplex`.
struct KernelBasis {
  RationalMatrix basis;                 // n x (n - d); column i is b^(i)
  IndexSet identity_rows;               // sorted, size n - d
  IndexSet simplex;                     // sorted complement, size d
  IndexSet column_permutation;          // identity_rows followed by simplex

  std::size_t size() const noexcept { return basis.cols(); }
  std::size_t ambient() const noexcept { return basis.rows(); }
  RationalVector column(std::size_t i) const { return basis.column(i); }
  // sum_i k_i b^(i)
  RationalVector combination(std::span<const Integer> k) const;
  RationalVector combination(std::span<const Rational> k) const;
};

KernelBasis kernel_basis(const IntegerPointConfig& a, std::optional<IndexSet> simplex = std::nullopt);

// Kernel basis whose identity block sits on the given rows.
KernelBasis kernel_basis_with_identity_rows(const IntegerPointConfig& a, const IndexSet& identity_rows);

// L' = { k in Z^(n-d) : sum_i k_i b^(i) in Z^n }.
class SublatticeLprime {
 public:
  SublatticeLprime() = default;
  explicit SublatticeLprime(IntegerMatrix hermite_basis);

  std::size_t dimension() const noexcept { return dimension_; }
  // Rows form a basis in Hermite normal form.
  const IntegerMatrix& hermite_basis() const noexcept { return hnf_; }
  // (n-d) x m matrix whose columns generate L'.
  IntegerMatrix generators() const { return hnf_.transpose(); }

  bool contains(std::span<const Integer> k) const;
  // Canonical representative of k + L' inside the box prod [0, h_jj).
  IntegerVector reduce(std::span<const Integer> k) const;
  Integer index() const;

  friend bool operator==(const SublatticeLprime&, const SublatticeLprime&) = default;

 private:
  IntegerMatrix hnf_;
  std::size_t dimension_ = 0;
};

SublatticeLprime lattice_Lprime(const KernelBasis& b);

// Definition check: sum_i k_i b^(i) is integral.
bool in_Lprime_by_definition(const KernelBasis& b, std::span<const Integer> k);

// All l in Z^n with A l = 0 and max |l_i| <= bound (brute force).
std::vector<std::vector<std::int64_t>> enumerate_kernel_box(const IntegerPointConfig& a, std::int64_t bound);

}  // namespace gkz
