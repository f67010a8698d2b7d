#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gkz/polytope.hpp"
#include "gkz/solutions.hpp"

namespace gkz {

struct PipelineConfig {
  int truncation = 30;
  double radius = std::exp(-1.0);
  double margin = 1e-3;
  double tolerance = 1e-8;
  std::uint64_t seed = 20240607;
  std::string format = "json";
  std::optional<RationalVector> base_weight;  // on A~; default (1, ..., 1, 0)
  PerturbationOptions perturbation;

  // Throws ValidationError on a bad combination.
  void validate() const;
};

RationalVector default_base_weight(std::size_t n);

struct SolveResult {
  IntegerPointConfig a;
  IntegerPointConfig homogenized;
  CertifiedWeight weight;
  Triangulation triangulation;              // of A~, under the certified weight
  std::vector<StandardPair> pairs;          // all standard pairs of the initial ideal
  std::vector<StandardPair> top_pairs;      // |T| = d + 1
  std::vector<AffineExponent> exponents;    // per top pair, for A~
  std::vector<TruncatedSeriesFamily> series;  // per top pair, dehomogenized
  std::vector<SolutionBranch> branches;
  Integer volume;
};

// homogenize, toric ideal, perturbed weight, initial ideal, standard pairs,
// exponents, series, dehomogenization, branch assembly.
SolveResult solve(const IntegerPointConfig& a, const PipelineConfig& config);

struct BranchCheck {
  std::size_t branch = 0;
  bool euler_exact = false;
  std::vector<ShiftResidual> shifts;
  double value_abs = 0.0;
  bool conditioning_warning = false;
};

struct VerificationReport {
  RationalVector s;
  EvaluationPoint point;
  bool region_ok = false;  // -log x lies in C(A~, tau, r) for every simplex
  int low = 20;
  int high = 40;
  std::vector<BranchCheck> branches;
  IndependenceCertificate independence;
  bool rank_matches_volume = false;

  bool euler_ok() const;
  bool shifts_ok() const;
  bool passed() const;
};

// Seeded generic s: every branch is generic at s and at s shifted by each
// pairing S^(-a_j).
RationalVector sample_parameter(const SolveResult& result, const PipelineConfig& config);

// Samples s (seeded), picks the evaluation point, and checks the Euler
// identities, every shift pairing at the two truncations, the convergence
// region and independence. Probes default to default_probes(.., 3 m).
VerificationReport verify(const SolveResult& result, const PipelineConfig& config,
                          const std::optional<std::vector<Operator>>& probes = std::nullopt, int low = 20,
                          int high = 40);
VerificationReport verify(const SolveResult& result, const PipelineConfig& config, const RationalVector& s,
                          const std::optional<std::vector<Operator>>& probes = std::nullopt, int low = 20,
                          int high = 40);

// The independence certificate used by verify: probes default to
// default_probes(.., 3 m), points are probe_points(point, a, m, seed) inside
// the convergence region.
IndependenceCertificate independence(const SolveResult& result, const PipelineConfig& config, const RationalVector& s,
                                     const EvaluationPoint& point,
                                     const std::optional<std::vector<Operator>>& probes = std::nullopt);

// The points used for independence: the evaluation point, two more near it,
// and `extra` seeded complex points further inside. Callers filter by region
// (which only sees |x|).
std::vector<ProbePoint> probe_points(const EvaluationPoint& p, const IntegerPointConfig& a, std::size_t extra = 0,
                                     std::uint64_t seed = 0);

}  // namespace gkz
