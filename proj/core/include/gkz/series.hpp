#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "gkz/lattice.hpp"
#include "gkz/standard_pairs.hpp"

namespace gkz {

// lambda(s) = c + M s. The parameters are named s<first_parameter>, ...;
// exponents for a homogenized configuration start at s0.
struct AffineExponent {
  RationalVector constant;
  RationalMatrix matrix;
  std::size_t first_parameter = 1;

  std::size_t size() const noexcept { return constant.size(); }
  std::size_t parameters() const noexcept { return matrix.cols(); }
  RationalVector at(std::span<const Rational> s) const;
  std::string coordinate_to_string(std::size_t j) const;

  friend bool operator==(const AffineExponent&, const AffineExponent&) = default;
};

// lambda_i = a_i off T and lambda_T = A_T^{-1}(s - A a). Parameters of the
// result are named from s0 when `a` is a homogenization.
AffineExponent admissible_exponent(const StandardPair& pair, const IntegerPointConfig& a,
                                   std::size_t first_parameter = 0);

// A lambda(s) = s identically.
bool satisfies_euler_identity(const AffineExponent& lambda, const IntegerPointConfig& a);

// lambda_j(s) stays at distance > margin from the integers for j in tau.
bool genericity_check(const AffineExponent& lambda, std::span<const Rational> s, const IndexSet& tau,
                      double margin = 1e-3);

// Sum over k' >= 0, k' - lambda_hat in L', |k'|_1 <= N, of
// x^e / Gamma(e + 1) with e = lambda(s) + sum_i (k' - lambda_hat)_i b^(i).
// The coordinates of e on the identity rows of B are exactly k'.
namespace detail {

struct SupportCache {
  std::mutex mutex;
  int order = -1;
  IntegerVector offset;
  IntegerMatrix lattice;
  std::vector<IntegerVector> points;  // sorted by |k'|_1, then lexicographically
  std::vector<std::size_t> level_end;  // points with |k'|_1 <= t end at level_end[t]
};

}  // namespace detail

struct TruncatedSeriesFamily {
  AffineExponent exponent;
  KernelBasis kernel;
  SublatticeLprime lattice;
  IntegerVector offset;  // lambda_hat
  int truncation = 0;
  bool homogeneous = false;

  const IndexSet& simplex() const noexcept { return kernel.simplex; }
  // Sorted by |k'|_1, then lexicographically.
  std::vector<IntegerVector> support() const { return support(truncation); }
  std::vector<IntegerVector> support(int truncation_order) const;
  RationalVector term_exponent(std::span<const Rational> s, const IntegerVector& kprime) const;
  // The leading monomial x^lambda(s) as text, e.g. "x2 x3^(1/3 s1 - 2/3)".
  std::string leading_monomial() const;

 private:
  // Shared by copies; rebuilt when the offset or lattice no longer match.
  std::shared_ptr<detail::SupportCache> support_cache_ = std::make_shared<detail::SupportCache>();
};

TruncatedSeriesFamily build_series(const AffineExponent& lambda, const KernelBasis& b, const SublatticeLprime& lp,
                                   int truncation);

// Forget the last variable: drop x_{n+1}, its Gamma factor and the s0
// parameter. Throws unless the family is homogeneous with n+1 in its simplex.
TruncatedSeriesFamily dehomogenize(const TruncatedSeriesFamily& family);

// Finite sum of c x^e / Gamma(e + 1) with exact rational e and c. Terms with
// a Gamma pole are never stored.
class TermSum {
 public:
  using Map = std::map<RationalVector, Rational>;

  TermSum() = default;
  explicit TermSum(std::size_t nvars) : nvars_(nvars) {}

  std::size_t nvars() const noexcept { return nvars_; }
  const Map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  void add(const RationalVector& e, const Rational& c);
  TermSum& operator+=(const TermSum& o);
  TermSum& operator-=(const TermSum& o);
  TermSum scaled(const Rational& c) const;

  TermSum derivative(std::size_t j) const;                // d_j
  TermSum times_variable(std::size_t j, int power) const;  // x_j^power, power may be negative

 private:
  std::size_t nvars_ = 0;
  Map terms_;
};

TermSum materialize(const TruncatedSeriesFamily& family, std::span<const Rational> s, int truncation);

// exp(2 pi i sum_k m_k e_{simplex[k]}); the trivial character when m is empty.
struct Character {
  IndexSet simplex;
  IntegerVector m;

  Rational phase(const RationalVector& e) const;  // in [0, 1)
  bool trivial() const;
};

struct Evaluation {
  std::complex<double> value;
  double magnitude = 0.0;  // sum of |terms|
  std::size_t terms = 0;
  bool conditioning_warning = false;
  double min_pole_distance = 0.0;
};

// `arg`, when given, puts the point at x_j e^(i arg_j) on the principal branch.
Evaluation evaluate(const TermSum& sum, std::span<const double> x, const Character& chi = {}, double margin = 1e-3,
                    std::span<const double> arg = {});
// Sums in support order.
Evaluation evaluate(const TruncatedSeriesFamily& family, std::span<const Rational> s, std::span<const double> x,
                    int truncation, double margin = 1e-3);

}  // namespace gkz
