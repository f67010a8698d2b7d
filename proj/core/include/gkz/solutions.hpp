#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkz/groebner.hpp"
#include "gkz/operator_expr.hpp"
#include "gkz/series.hpp"
#include "gkz/standard_pairs.hpp"

namespace gkz {

// The dehomogenized Gamma-series of one top-dimensional standard pair of
// in(I_{A~}): admissible exponent, kernel basis on the pair's face, L'.
TruncatedSeriesFamily coset_series(const IntegerPointConfig& a, const StandardPair& pair, int truncation);

// Representatives of Z^tau / A_tau^T Z^d, taken lexicographically from the
// box [0, |det A_tau|)^d; the zero vector comes first.
std::vector<IntegerVector> character_representatives(const IntegerPointConfig& a, const IndexSet& tau);

// A solution of the differential-difference system: the sum of the coset
// series of all pairs on one simplex, each term weighted by a character of
// its exponent on the simplex.
struct SolutionBranch {
  IndexSet simplex;  // in A, 0-based
  Character character;
  std::vector<StandardPair> pairs;  // for A~
  std::vector<TruncatedSeriesFamily> cosets;

  std::string label() const;  // e.g. "tau={3} m=(1)"
  bool generic_at(std::span<const Rational> s, double margin) const;
  TermSum materialize(std::span<const Rational> s, int truncation) const;
  Evaluation evaluate(std::span<const Rational> s, std::span<const double> x, int truncation,
                      double margin = 1e-3) const;
};

// Groups the coset series by face and twists them. Throws CertificationError
// unless the pairs on each face hit every class of Z^(n-d)/L' exactly once.
std::vector<SolutionBranch> assemble_branches(const IntegerPointConfig& a, const std::vector<StandardPair>& top_pairs,
                                              const std::vector<TruncatedSeriesFamily>& cosets);

// ---------------------------------------------------------------------------
// Operators acting on series

// Materialized series as a function of the parameter s.
using SeriesAt = std::function<TermSum(std::span<const Rational> s)>;

struct Applied {
  std::complex<double> value;
  double magnitude = 0.0;  // sum of |c_k| |terms|
  bool exact = false;      // computed through exact term arithmetic
  bool conditioning_warning = false;
};

// Every coefficient denominator is free of x.
bool exact_route_available(const Operator& op);
std::vector<std::vector<int>> required_shifts(const Operator& op);

// (op f)(s) as an exact term sum; needs exact_route_available(op).
TermSum apply_exact(const Operator& op, const SeriesAt& f, std::span<const Rational> s);

Applied apply_operator(const Operator& op, const SolutionBranch& f, std::span<const Rational> s,
                       std::span<const double> x, int truncation, double margin = 1e-3);
Applied apply_operator(const Operator& op, const TruncatedSeriesFamily& f, std::span<const Rational> s,
                       std::span<const double> x, int truncation, double margin = 1e-3);

// d_j - prod_i S_i^(-a_ij)
Operator shift_pairing_operator(const IntegerPointConfig& a, std::size_t j);
// sum_j a_ij x_j d_j - s_i
Operator euler_operator(const IntegerPointConfig& a, std::size_t i);

// A lambda(s) = s and A B = 0 for every coset, and A e = s for every
// materialized exponent at s.
bool euler_exact(const IntegerPointConfig& a, const SolutionBranch& f, std::span<const Rational> s, int truncation);

struct ShiftResidual {
  std::size_t column = 0;
  double low = 0.0;   // |(d_j - S^-a_j) f| at the low truncation
  double high = 0.0;  // at the high truncation
  double norm = 0.0;  // |f| at the high truncation
  bool passed = false;
};

// The two terms are combined exactly before evaluation, so only the
// truncation boundary survives. Passes when high < tolerance |f| and the
// residual drops at least 100 times from low to high.
ShiftResidual check_shift_pairing(const IntegerPointConfig& a, const SolutionBranch& f, std::size_t j,
                                  std::span<const Rational> s, std::span<const double> x, double tolerance,
                                  int low = 20, int high = 40);
// Every column j, sharing the materialized series.
std::vector<ShiftResidual> check_shift_pairings(const IntegerPointConfig& a, const SolutionBranch& f,
                                                std::span<const Rational> s, std::span<const double> x,
                                                double tolerance, int low = 20, int high = 40);

// ---------------------------------------------------------------------------
// Where to evaluate

// psi in C(A, tau, r): the phi with A_tau^T phi = psi_tau satisfies
// psi_i - <phi, a_i> > -log r off tau.
bool region_member(const IntegerPointConfig& a, const IndexSet& tau, std::span<const double> psi, double r);

struct EvaluationPoint {
  std::vector<double> x;       // in (0, inf)^n
  double t = 0.0;
  std::vector<double> phi;     // torus part, length d
  double max_torus = 0.0;      // max over tau and k of x^(b^(k))
};

// x_j = exp(-t psi_j + <phi, a_j>). psi is a direction in the cone of the
// weight (first n coordinates, shifted so the last is 0), balanced so the
// slacks of all kernel directions are comparable; t makes the largest torus
// coordinate over the triangulation of A~ equal `target`, phi centers log x.
// Throws CertificationError if a simplex has a kernel direction of
// nonpositive weight.
EvaluationPoint choose_evaluation_point(const IntegerPointConfig& a, const RationalVector& weight,
                                        const std::vector<IndexSet>& triangulation, double target = 0.1);

// s with coordinates k/97, k = 1..96, such that every branch is generic at s
// and at s + sigma for every listed shift.
RationalVector sample_generic_s(const std::vector<SolutionBranch>& branches, std::size_t d, std::mt19937_64& rng,
                                const std::vector<std::vector<int>>& shifts, double margin = 1e-3,
                                int max_draws = 1000);

// ---------------------------------------------------------------------------
// Independence

struct IndependenceCertificate {
  double determinant = 0.0;  // coset_determinant * twist_determinant
  double coset_determinant = 0.0;
  double twist_determinant = 0.0;
  bool certified = false;
  std::vector<std::string> probes;  // the rows that were used
  std::size_t candidates = 0;
};

// x^u d^u for standard monomials u of `initial` (as an ideal of A~) with
// u_(n+1) = 0, by increasing degree.
std::vector<Operator> default_probes(const IntegerPointConfig& a, const MonomialIdeal& initial, std::size_t count);

// x_j e^(i arg_j); an empty arg is the positive real point x.
struct ProbePoint {
  std::vector<double> x;
  std::vector<double> arg;
};

// Rows are probe values at each point, columns the distinct coset series
// behind the branches, scaled to unit maximum. m rows are chosen by
// column-pivoted QR and scaled to unit length. The determinant is multiplied
// by the Hadamard ratio of the twist matrix taking cosets to branches; the
// result is certified when it exceeds the threshold.
IndependenceCertificate independence_certificate(const std::vector<SolutionBranch>& branches,
                                                 const std::vector<Operator>& probes, std::span<const Rational> s,
                                                 const std::vector<ProbePoint>& points, int truncation,
                                                 double threshold = 1e-6);

// ---------------------------------------------------------------------------
// Relations  shift V = P V

struct Relation {
  Operator shift;
  std::vector<Operator> vector;
  std::vector<std::vector<Operator>> matrix;
  std::vector<std::vector<std::string>> entries;  // source text of P
};

// Lines "vector: op ; op ; ...", "shift: op" and one "row: p ; p ; ..." per
// vector entry; '#' starts a comment.
Relation parse_relation(std::string_view text, OperatorSpace space);
std::string to_string(const Relation& r);

struct RelationResidual {
  std::size_t branch = 0;
  std::size_t row = 0;
  double residual = 0.0;  // |lhs - sum rhs_k| / max(|lhs|, sum |rhs_k|)
};

struct RelationReport {
  std::vector<RelationResidual> residuals;
  double max_residual = 0.0;
  bool passed(double tolerance) const { return max_residual < tolerance; }
};

RelationReport check_relation(const Relation& relation, const std::vector<SolutionBranch>& branches,
                              std::span<const Rational> s, std::span<const double> x, int truncation,
                              double margin = 1e-3);

}  // namespace gkz
