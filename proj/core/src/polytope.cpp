#include "gkz/polytope.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "gkz/errors.hpp"

namespace gkz {

IndexSet complement_of(const IndexSet& tau, std::size_t n) {
  IndexSet out;
  for (std::size_t j = 0; j < n; ++j)
    if (std::find(tau.begin(), tau.end(), j) == tau.end()) out.push_back(j);
  return out;
}

std::vector<IndexSet> index_subsets(std::size_t n, std::size_t k) {
  std::vector<IndexSet> out;
  if (k > n) return out;
  IndexSet cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

namespace {

std::string format_set(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

enum class CellStatus { kCell, kNotCell, kTie };

// c solves c.a_j = h_j on tau; compare c.a_j with h_j off tau.
CellStatus classify(const RationalMatrix& vectors, const RationalVector& heights, const IndexSet& tau,
                    const RationalMatrix& inv_t) {
  // c^T = h_tau^T * A_tau^{-1}
  const std::size_t d = tau.size();
  RationalVector c(d, Rational(0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) c[i] += heights[tau[k]] * inv_t(k, i);
  bool tie = false;
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    if (std::find(tau.begin(), tau.end(), j) != tau.end()) continue;
    Rational v = 0;
    for (std::size_t i = 0; i < d; ++i) v += c[i] * vectors(i, j);
    if (v > heights[j]) return CellStatus::kNotCell;
    if (v == heights[j]) tie = true;
  }
  return tie ? CellStatus::kTie : CellStatus::kCell;
}

}  // namespace

Integer simplex_volume(const IntegerPointConfig& a, const IndexSet& tau) {
  if (tau.size() != a.d()) throw ValidationError("simplex_volume", "simplex needs exactly d indices");
  Integer det = determinant(IntegerMatrix(a.matrix().select_columns(tau)));
  if (det == 0) throw ValidationError("simplex_volume", "columns " + format_set(tau) + " are linearly dependent");
  return abs(det);
}

Triangulation regular_triangulation(const IntegerPointConfig& a, const RationalVector& w) {
  if (w.size() != a.n()) throw ValidationError("regular_triangulation", "weight length must equal n");
  const RationalMatrix ar = to_rational(a.matrix());
  Triangulation tri;
  tri.weight = w;
  for (const auto& tau : index_subsets(a.n(), a.d())) {
    auto inv = inverse(ar.select_columns(tau));
    if (!inv) continue;
    switch (classify(ar, w, tau, *inv)) {
      case CellStatus::kCell:
        tri.simplices.push_back(tau);
        break;
      case CellStatus::kTie:
        throw CertificationError("regular_triangulation",
                                 "weight induces a non-simplicial cell containing " + format_set(tau) +
                                     "; perturb the weight");
      case CellStatus::kNotCell:
        break;
    }
  }
  return tri;
}

Integer normalized_volume(const IntegerPointConfig& a) {
  // Points (1, 0) and (1, a_j) in dimension d + 1; their regular
  // triangulation under generic heights triangulates conv({0} and A).
  const std::size_t d = a.d();
  const std::size_t n = a.n();
  RationalMatrix pts(d + 1, n + 1, Rational(0));
  for (std::size_t j = 0; j <= n; ++j) pts(0, j) = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) pts(i + 1, j + 1) = a(i, j);
  if (rank(pts) < d + 1) return 0;

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_int_distribution<long> height(0, 1'000'000);
  for (int attempt = 0; attempt < 64; ++attempt) {
    RationalVector h(n + 1);
    for (auto& v : h) v = Rational(height(rng));
    Integer total = 0;
    bool tie = false;
    for (const auto& tau : index_subsets(n + 1, d + 1)) {
      RationalMatrix sub = pts.select_columns(tau);
      Rational det = determinant(sub);
      if (det == 0) continue;
      auto inv = inverse(sub);
      CellStatus s = classify(pts, h, tau, *inv);
      if (s == CellStatus::kTie) {
        tie = true;
        break;
      }
      if (s == CellStatus::kCell) total += abs(det.get_num());
    }
    if (!tie) return total;
  }
  throw CertificationError("normalized_volume", "no generic lifting found");
}

namespace {

Rational dot_diff(const RationalVector& w, const Exponent& a, const Exponent& b) {
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != b[j]) s += w[j] * (a[j] - b[j]);
  return s;
}

// Strict: every non-leading term of every g is lighter than the leading one
// under the lexicographic comparison of the given weights.
bool leads_strict(const std::vector<Polynomial>& gb, const MatrixTermOrder& order,
                  const std::vector<RationalVector>& weights) {
  for (const auto& g : gb) {
    Exponent lead = leading_monomial(g, order);
    for (const auto& [e, c] : g.terms()) {
      if (e == lead) continue;
      bool ok = false;
      for (const auto& w : weights) {
        int s = sgn(dot_diff(w, lead, e));
        if (s < 0) return false;
        if (s > 0) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
  }
  return true;
}

MonomialIdeal leading_ideal(const std::vector<Polynomial>& gb, const MatrixTermOrder& order, std::size_t n) {
  std::vector<Exponent> leads;
  for (const auto& g : gb) leads.push_back(leading_monomial(g, order));
  return MonomialIdeal(n, leads);
}

}  // namespace

CertifiedWeight perturbed_weight(const std::vector<Polynomial>& ideal, const RationalVector& w,
                                 const PerturbationOptions& options) {
  const std::size_t n = w.size();
  CertifiedWeight out;
  bool zero = std::all_of(ideal.begin(), ideal.end(), [](const Polynomial& p) { return p.is_zero(); });
  if (zero) {
    out.weight.entries = w;
    out.order = MatrixTermOrder(n, {w});
    out.initial = MonomialIdeal(n, {});
    return out;
  }
  const std::size_t free_coords = options.homogenized ? n - 1 : n;

  RationalVector v;
  std::vector<Polynomial> gb;
  if (options.direction) {
    v = *options.direction;
    if (v.size() != n) throw ValidationError("perturbed_weight", "direction length must equal n");
    if (options.homogenized && v.back() != 0)
      throw ValidationError("perturbed_weight", "the last coordinate of the direction must be 0");
    out.order = MatrixTermOrder(n, {w, v});
    gb = buchberger(ideal, out.order);
    if (!leads_strict(gb, out.order, {w, v}))
      throw CertificationError("perturbed_weight", "direction does not break all ties of the base weight");
  } else {
    // lexicographic tiebreak d1 > d2 > ... on the free coordinates, realized
    // as v = (1, delta, delta^2, ...) for a small enough delta
    std::vector<RationalVector> rows{w};
    for (std::size_t j = 0; j < free_coords; ++j) {
      RationalVector e(n, Rational(0));
      e[j] = 1;
      rows.push_back(e);
    }
    MatrixTermOrder lex_order(n, rows);
    gb = buchberger(ideal, lex_order);
    bool found = false;
    for (unsigned k = 1; k <= 64 && !found; ++k) {
      Rational delta(1, 1);
      delta /= Rational(Integer(1) << k);
      v.assign(n, Rational(0));
      Rational p = 1;
      for (std::size_t j = 0; j < free_coords; ++j) {
        v[j] = p;
        p *= delta;
      }
      out.order = MatrixTermOrder(n, {w, v});
      found = leads_strict(gb, out.order, {w, v}) && leads_strict(gb, lex_order, {w, v});
    }
    if (!found) throw CertificationError("perturbed_weight", "no tiebreak direction separates the leading terms");
  }

  auto certify = [&](const Rational& eps) {
    RationalVector omega(n);
    for (std::size_t j = 0; j < n; ++j) omega[j] = w[j] + eps * v[j];
    return leads_strict(gb, out.order, {omega}) ? std::optional<RationalVector>(omega) : std::nullopt;
  };

  std::optional<RationalVector> omega;
  Rational eps;
  unsigned halvings = 0;
  if (options.epsilon) {
    eps = *options.epsilon;
    omega = certify(eps);
    if (!omega)
      throw CertificationError("perturbed_weight", "epsilon = " + to_string(eps) + " leaves a tie or reorders a term");
  } else {
    for (unsigned k = 4; k <= 64 && !omega; ++k) {
      eps = Rational(1) / Rational(Integer(1) << k);
      omega = certify(eps);
      halvings = k;
    }
    if (!omega) throw CertificationError("perturbed_weight", "epsilon schedule 1/2^4 .. 1/2^64 exhausted");
  }

  MonomialIdeal in = leading_ideal(gb, out.order, n);
  // a posteriori: recompute under the explicit weight alone
  MatrixTermOrder explicit_order(n, {*omega});
  auto check = buchberger(ideal, explicit_order);
  if (!(leading_ideal(check, explicit_order, n) == in))
    throw CertificationError("perturbed_weight", "initial ideal under w(eps) differs from the matrix order's");

  out.weight.entries = *omega;
  out.weight.perturbation = WeightPerturbation{w, v, eps, halvings};
  out.groebner_basis = std::move(gb);
  out.initial = std::move(in);
  return out;
}

CertifiedWeight perturbed_weight(const IntegerPointConfig& a, const RationalVector& w,
                                 const PerturbationOptions& options) {
  return perturbed_weight(toric_ideal(a), w, options);
}

}  // namespace gkz
