#include "gkz/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "gkz/errors.hpp"
#include "gkz/groebner.hpp"
#include "gkz/standard_pairs.hpp"

namespace gkz {

void PipelineConfig::validate() const {
  if (truncation < 0) throw ValidationError("config", "truncation must be nonnegative");
  if (!(radius > 0 && radius < 1)) throw ValidationError("config", "radius must lie in (0, 1)");
  if (!(margin > 0 && margin < 0.5)) throw ValidationError("config", "margin must lie in (0, 1/2)");
  if (!(tolerance > 0)) throw ValidationError("config", "tolerance must be positive");
  if (format != "json" && format != "text") throw ValidationError("config", "format must be json or text");
}

RationalVector default_base_weight(std::size_t n) {
  RationalVector w(n + 1, Rational(1));
  w[n] = 0;
  return w;
}

SolveResult solve(const IntegerPointConfig& a, const PipelineConfig& config) {
  config.validate();
  a.validate();
  SolveResult r;
  r.a = a;
  r.homogenized = homogenize(a);
  const RationalVector base = config.base_weight.value_or(default_base_weight(a.n()));
  if (base.size() != a.n() + 1) throw ValidationError("solve", "base weight must have n + 1 entries");
  r.weight = perturbed_weight(r.homogenized, base, config.perturbation);
  r.triangulation = regular_triangulation(r.homogenized, r.weight.weight.entries);
  r.pairs = standard_pairs(r.weight.initial);
  for (const auto& p : r.pairs)
    if (p.face.size() == a.d() + 1) r.top_pairs.push_back(p);

  std::set<IndexSet> faces;
  for (const auto& p : r.top_pairs) faces.insert(p.face);
  if (faces != std::set<IndexSet>(r.triangulation.simplices.begin(), r.triangulation.simplices.end()))
    throw CertificationError("solve", "faces of the top-dimensional standard pairs differ from the triangulation");

  for (const auto& p : r.top_pairs) {
    r.exponents.push_back(admissible_exponent(p, r.homogenized));
    r.series.push_back(coset_series(a, p, config.truncation));
  }
  r.branches = assemble_branches(a, r.top_pairs, r.series);
  r.volume = normalized_volume(a);
  if (Integer(r.branches.size()) != r.volume)
    throw CertificationError("solve", std::to_string(r.branches.size()) + " branches for volume " +
                                          to_string(r.volume));
  return r;
}

bool VerificationReport::euler_ok() const {
  return std::all_of(branches.begin(), branches.end(), [](const BranchCheck& b) { return b.euler_exact; });
}

bool VerificationReport::shifts_ok() const {
  return std::all_of(branches.begin(), branches.end(), [](const BranchCheck& b) {
    return std::all_of(b.shifts.begin(), b.shifts.end(), [](const ShiftResidual& r) { return r.passed; });
  });
}

bool VerificationReport::passed() const {
  return region_ok && euler_ok() && shifts_ok() && independence.certified && rank_matches_volume;
}

std::vector<ProbePoint> probe_points(const EvaluationPoint& p, const IntegerPointConfig& a, std::size_t extra,
                                     std::uint64_t seed) {
  std::vector<ProbePoint> out{{p.x, {}}};
  if (p.t == 0.0) return out;
  std::vector<double> phi_a(p.x.size(), 0.0);
  for (std::size_t j = 0; j < p.x.size(); ++j)
    for (std::size_t i = 0; i < a.d(); ++i) phi_a[j] += p.phi[i] * a(i, j).get_d();
  // deeper into the region along the weight, and a sign-alternating nudge
  ProbePoint deeper, nudged;
  for (std::size_t j = 0; j < p.x.size(); ++j) {
    deeper.x.push_back(std::exp(phi_a[j] + 1.25 * (std::log(p.x[j]) - phi_a[j])));
    nudged.x.push_back(p.x[j] * std::exp(j % 2 == 0 ? 0.05 : -0.05));
  }
  out.push_back(std::move(deeper));
  out.push_back(std::move(nudged));
  // Complex points: coset series that differ by powers of a small monomial
  // become well separated phases instead of a Vandermonde system on nearby
  // positive nodes.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5), angle(-3.0, 3.0);
  for (std::size_t k = 0; k < extra; ++k) {
    ProbePoint q;
    for (std::size_t j = 0; j < p.x.size(); ++j) {
      q.x.push_back(std::exp(phi_a[j] + 1.25 * (std::log(p.x[j]) - phi_a[j]) + jitter(rng)));
      q.arg.push_back(angle(rng));
    }
    out.push_back(std::move(q));
  }
  return out;
}

IndependenceCertificate independence(const SolveResult& result, const PipelineConfig& config, const RationalVector& s,
                                     const EvaluationPoint& point, const std::optional<std::vector<Operator>>& probes) {
  const IntegerPointConfig& a = result.a;
  const std::size_t m = result.branches.size();
  const std::vector<Operator> used =
      probes ? *probes : default_probes(a, result.weight.initial, std::max<std::size_t>(3 * m, 3));
  std::vector<ProbePoint> points;
  for (auto& x : probe_points(point, a, m, config.seed)) {
    std::vector<double> p;
    for (double v : x.x) p.push_back(-std::log(v));
    p.push_back(0.0);
    bool inside = std::all_of(result.triangulation.simplices.begin(), result.triangulation.simplices.end(),
                              [&](const IndexSet& tau) { return region_member(result.homogenized, tau, p, config.radius); });
    if (inside) points.push_back(std::move(x));
  }
  return independence_certificate(result.branches, used, s, points, config.truncation);
}

RationalVector sample_parameter(const SolveResult& result, const PipelineConfig& config) {
  const IntegerPointConfig& a = result.a;
  std::vector<std::vector<int>> shifts;
  for (std::size_t j = 0; j < a.n(); ++j) {
    std::vector<int> sigma(a.d());
    for (std::size_t i = 0; i < a.d(); ++i) sigma[i] = -static_cast<int>(a(i, j).get_si());
    shifts.push_back(sigma);
  }
  std::mt19937_64 rng(config.seed);
  return sample_generic_s(result.branches, a.d(), rng, shifts, config.margin);
}

VerificationReport verify(const SolveResult& result, const PipelineConfig& config,
                          const std::optional<std::vector<Operator>>& probes, int low, int high) {
  return verify(result, config, sample_parameter(result, config), probes, low, high);
}

VerificationReport verify(const SolveResult& result, const PipelineConfig& config, const RationalVector& s,
                          const std::optional<std::vector<Operator>>& probes, int low, int high) {
  const IntegerPointConfig& a = result.a;
  VerificationReport rep;
  rep.s = s;
  rep.low = low;
  rep.high = high;
  rep.point = choose_evaluation_point(a, result.weight.weight.entries, result.triangulation.simplices);

  std::vector<double> psi;
  for (double v : rep.point.x) psi.push_back(-std::log(v));
  psi.push_back(0.0);
  rep.region_ok = std::all_of(result.triangulation.simplices.begin(), result.triangulation.simplices.end(),
                              [&](const IndexSet& tau) {
                                return region_member(result.homogenized, tau, psi, config.radius);
                              });

  for (std::size_t b = 0; b < result.branches.size(); ++b) {
    const SolutionBranch& f = result.branches[b];
    BranchCheck c;
    c.branch = b;
    c.euler_exact = euler_exact(a, f, s, high);
    c.shifts = check_shift_pairings(a, f, s, rep.point.x, config.tolerance, low, high);
    Evaluation ev = f.evaluate(s, rep.point.x, high, config.margin);
    c.value_abs = std::abs(ev.value);
    c.conditioning_warning = ev.conditioning_warning;
    rep.branches.push_back(std::move(c));
  }

  rep.independence = independence(result, config, s, rep.point, probes);
  rep.rank_matches_volume = Integer(result.top_pairs.size()) == result.volume &&
                            Integer(rank_by_count(a)) == result.volume &&
                            Integer(result.branches.size()) == result.volume;
  return rep;
}

}  // namespace gkz
