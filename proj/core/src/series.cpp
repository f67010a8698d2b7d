#include "gkz/series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "gkz/errors.hpp"
#include "gkz/log_gamma.hpp"

namespace gkz {

RationalVector AffineExponent::at(std::span<const Rational> s) const {
  if (s.size() != parameters()) throw ValidationError("exponent", "parameter vector has the wrong length");
  RationalVector out = constant;
  for (std::size_t j = 0; j < size(); ++j)
    for (std::size_t p = 0; p < parameters(); ++p)
      if (matrix(j, p) != 0) out[j] += matrix(j, p) * s[p];
  return out;
}

std::string AffineExponent::coordinate_to_string(std::size_t j) const {
  std::string out;
  auto append = [&](const Rational& c, const std::string& name) {
    if (c == 0) return;
    Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (name.empty()) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + " ";
      out += name;
    }
  };
  for (std::size_t p = 0; p < parameters(); ++p) append(matrix(j, p), "s" + std::to_string(first_parameter + p));
  append(constant[j], "");
  return out.empty() ? "0" : out;
}

AffineExponent admissible_exponent(const StandardPair& pair, const IntegerPointConfig& a,
                                   std::size_t first_parameter) {
  const IndexSet& t = pair.face;
  if (t.size() != a.d()) throw ValidationError("admissible_exponent", "face is not a d-simplex");
  if (pair.root.size() != a.n()) throw ValidationError("admissible_exponent", "root has the wrong length");
  const RationalMatrix ar = to_rational(a.matrix());
  auto inv = inverse(ar.select_columns(t));
  if (!inv) throw ValidationError("admissible_exponent", "simplex-degenerate face");

  AffineExponent lam;
  lam.first_parameter = first_parameter;
  lam.constant.assign(a.n(), Rational(0));
  lam.matrix = RationalMatrix(a.n(), a.d(), Rational(0));
  RationalVector root(pair.root.begin(), pair.root.end());
  for (std::size_t j = 0; j < a.n(); ++j)
    if (!std::binary_search(t.begin(), t.end(), j)) lam.constant[j] = root[j];
  RationalVector image = multiply(ar, root);
  RationalVector shift = multiply(*inv, image);
  for (std::size_t k = 0; k < t.size(); ++k) {
    lam.constant[t[k]] = -shift[k];
    for (std::size_t p = 0; p < a.d(); ++p) lam.matrix(t[k], p) = (*inv)(k, p);
  }
  return lam;
}

bool satisfies_euler_identity(const AffineExponent& lambda, const IntegerPointConfig& a) {
  const RationalMatrix ar = to_rational(a.matrix());
  if (lambda.size() != a.n() || lambda.parameters() != a.d()) return false;
  RationalMatrix am = multiply(ar, lambda.matrix);
  if (!(am == RationalMatrix::identity(a.d()))) return false;
  RationalVector ac = multiply(ar, lambda.constant);
  return std::all_of(ac.begin(), ac.end(), [](const Rational& v) { return v == 0; });
}

bool genericity_check(const AffineExponent& lambda, std::span<const Rational> s, const IndexSet& tau, double margin) {
  RationalVector v = lambda.at(s);
  for (std::size_t j : tau) {
    Rational f = frac(v[j]);
    double dist = std::min(to_double(f), to_double(Rational(1) - f));
    if (dist <= margin) return false;
  }
  return true;
}

namespace {

void compositions(std::size_t parts, int total, IntegerVector& cur, std::vector<IntegerVector>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(Integer(total));
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = 0; first <= total; ++first) {
    cur.push_back(Integer(first));
    compositions(parts, total - first, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<IntegerVector> TruncatedSeriesFamily::support(int truncation_order) const {
  const std::size_t m = kernel.size();
  std::vector<IntegerVector> out;
  if (m == 0) {
    out.emplace_back();
    return out;
  }
  if (truncation_order < 0) return out;
  detail::SupportCache& c = *support_cache_;
  std::lock_guard lock(c.mutex);
  if (c.offset != offset || !(c.lattice == lattice.hermite_basis())) {
    c.order = -1;
    c.points.clear();
    c.level_end.clear();
    c.offset = offset;
    c.lattice = lattice.hermite_basis();
  }
  IntegerVector cur;
  std::vector<IntegerVector> level;
  IntegerVector diff(m);
  for (int t = c.order + 1; t <= truncation_order; ++t) {
    level.clear();
    compositions(m, t, cur, level);
    for (auto& k : level) {
      for (std::size_t i = 0; i < m; ++i) diff[i] = k[i] - offset[i];
      if (lattice.contains(diff)) c.points.push_back(std::move(k));
    }
    c.level_end.push_back(c.points.size());
    c.order = t;
  }
  const std::size_t end = c.level_end[static_cast<std::size_t>(truncation_order)];
  return {c.points.begin(), c.points.begin() + static_cast<std::ptrdiff_t>(end)};
}

RationalVector TruncatedSeriesFamily::term_exponent(std::span<const Rational> s, const IntegerVector& kprime) const {
  RationalVector e = exponent.at(s);
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    Integer step = kprime[i] - offset[i];
    if (step == 0) continue;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (kernel.basis(j, i) != 0) e[j] += kernel.basis(j, i) * step;
  }
  return e;
}

std::string TruncatedSeriesFamily::leading_monomial() const {
  std::string out;
  for (std::size_t j = 0; j < exponent.size(); ++j) {
    bool constant = true;
    for (std::size_t p = 0; p < exponent.parameters(); ++p) constant = constant && exponent.matrix(j, p) == 0;
    const Rational& c = exponent.constant[j];
    if (constant && c == 0) continue;
    if (!out.empty()) out += " ";
    out += "x" + std::to_string(j + 1);
    if (constant) {
      if (c != 1) out += "^" + (is_integer(c) && c > 0 ? to_string(c) : "(" + to_string(c) + ")");
    } else {
      out += "^(" + exponent.coordinate_to_string(j) + ")";
    }
  }
  return out.empty() ? "1" : out;
}

TruncatedSeriesFamily build_series(const AffineExponent& lambda, const KernelBasis& b, const SublatticeLprime& lp,
                                   int truncation) {
  if (truncation < 0) throw ValidationError("build_series", "truncation order must be nonnegative");
  if (lambda.size() != b.ambient()) throw ValidationError("build_series", "exponent and kernel sizes differ");
  TruncatedSeriesFamily f;
  f.exponent = lambda;
  f.kernel = b;
  f.lattice = lp;
  f.truncation = truncation;
  f.homogeneous = lambda.first_parameter == 0;
  for (std::size_t r : b.identity_rows) {
    for (std::size_t p = 0; p < lambda.parameters(); ++p)
      if (lambda.matrix(r, p) != 0)
        throw ValidationError("build_series", "exponent depends on s off the simplex (not admissible)");
    if (!is_integer(lambda.constant[r]))
      throw ValidationError("build_series", "exponent is not integral off the simplex (not admissible)");
    f.offset.push_back(lambda.constant[r].get_num());
  }
  return f;
}

TruncatedSeriesFamily dehomogenize(const TruncatedSeriesFamily& family) {
  const std::size_t n1 = family.exponent.size();
  if (!family.homogeneous || n1 < 2) throw ValidationError("dehomogenize", "family is not homogenized");
  const std::size_t last = n1 - 1;
  const IndexSet& tau = family.simplex();
  if (!std::binary_search(tau.begin(), tau.end(), last))
    throw ValidationError("dehomogenize", "the last index is not in the simplex");
  for (std::size_t j = 0; j < last; ++j)
    if (family.exponent.matrix(j, 0) != 0)
      throw ValidationError("dehomogenize", "exponent depends on s0 before the last coordinate");

  TruncatedSeriesFamily out = family;
  out.homogeneous = false;
  out.exponent.first_parameter = 1;
  out.exponent.constant.resize(last);
  const std::size_t p = family.exponent.parameters() - 1;
  out.exponent.matrix = RationalMatrix(last, p);
  for (std::size_t j = 0; j < last; ++j)
    for (std::size_t k = 0; k < p; ++k) out.exponent.matrix(j, k) = family.exponent.matrix(j, k + 1);
  const std::size_t m = family.kernel.size();
  out.kernel.basis = RationalMatrix(last, m);
  for (std::size_t j = 0; j < last; ++j)
    for (std::size_t i = 0; i < m; ++i) out.kernel.basis(j, i) = family.kernel.basis(j, i);
  out.kernel.simplex.erase(std::find(out.kernel.simplex.begin(), out.kernel.simplex.end(), last));
  out.kernel.column_permutation.erase(
      std::find(out.kernel.column_permutation.begin(), out.kernel.column_permutation.end(), last));
  return out;
}

void TermSum::add(const RationalVector& e, const Rational& c) {
  if (c == 0) return;
  if (nvars_ == 0) nvars_ = e.size();
  for (const auto& v : e)
    if (gamma_term_vanishes(v)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TermSum& TermSum::operator+=(const TermSum& o) {
  for (const auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

TermSum& TermSum::operator-=(const TermSum& o) {
  for (const auto& [e, c] : o.terms_) add(e, -c);
  return *this;
}

TermSum TermSum::scaled(const Rational& c) const {
  TermSum out(nvars_);
  if (c == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace_hint(out.terms_.end(), e, v * c);
  return out;
}

TermSum TermSum::derivative(std::size_t j) const {
  // d_j x^e / Gamma(e+1) = x^(e - e_j) / Gamma(e): the coefficient is unchanged
  TermSum out(nvars_);
  for (const auto& [e, c] : terms_) {
    RationalVector f = e;
    f[j] -= 1;
    out.add(f, c);
  }
  return out;
}

TermSum TermSum::times_variable(std::size_t j, int power) const {
  TermSum out(nvars_);
  for (const auto& [e, c] : terms_) {
    RationalVector f = e;
    Rational coeff = c;
    if (power >= 0) {
      for (int t = 0; t < power; ++t) {
        f[j] += 1;
        coeff *= f[j];
      }
    } else {
      for (int t = 0; t < -power; ++t) {
        if (f[j] == 0)
          throw NumericError("operator", "x" + std::to_string(j + 1) +
                                             "^-1 on a term without x" + std::to_string(j + 1) +
                                             " leaves the Gamma-series form");
        coeff /= f[j];
        f[j] -= 1;
      }
    }
    out.add(f, coeff);
  }
  return out;
}

TermSum materialize(const TruncatedSeriesFamily& family, std::span<const Rational> s, int truncation) {
  TermSum out(family.exponent.size());
  const std::vector<IntegerVector> support = family.support(truncation);
  if (support.empty()) return out;
  // e(k') = lambda(s) + B (k' - offset), stepped from the previous term
  IntegerVector prev = family.offset;
  RationalVector e = family.exponent.at(s);
  for (const auto& k : support) {
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == prev[i]) continue;
      const Integer step = k[i] - prev[i];
      for (std::size_t j = 0; j < e.size(); ++j)
        if (family.kernel.basis(j, i) != 0) e[j] += family.kernel.basis(j, i) * step;
    }
    prev = k;
    out.add(e, Rational(1));
  }
  return out;
}

Rational Character::phase(const RationalVector& e) const {
  Rational p = 0;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (m[k] != 0) p += e[simplex[k]] * m[k];
  return frac(p);
}

bool Character::trivial() const {
  return std::all_of(m.begin(), m.end(), [](const Integer& v) { return v == 0; });
}

namespace {

struct TermValue {
  double log_mag;
  int sign;
  double pole_distance;
};

TermValue term_value(const RationalVector& e, std::span<const double> logx) {
  TermValue t{0.0, 1, std::numeric_limits<double>::infinity()};
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    const double ej = to_double(e[j]);
    t.log_mag += ej * logx[j];
    const double arg = to_double(e[j] + 1);
    if (!is_integer(e[j])) t.pole_distance = std::min(t.pole_distance, distance_to_pole(arg));
    LogGamma g = log_gamma(arg);
    t.log_mag -= g.log_abs;
    t.sign *= g.sign;
  }
  return t;
}

std::vector<double> logs(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] > 0)) throw NumericError("evaluate", "evaluation point must be strictly positive");
    out[j] = std::log(x[j]);
  }
  return out;
}

}  // namespace

Evaluation evaluate(const TermSum& sum, std::span<const double> x, const Character& chi, double margin,
                    std::span<const double> arg) {
  if (!sum.empty() && x.size() != sum.nvars()) throw NumericError("evaluate", "point has the wrong dimension");
  if (!arg.empty() && arg.size() != x.size()) throw NumericError("evaluate", "arguments have the wrong dimension");
  const auto lx = logs(x);
  Evaluation ev;
  ev.min_pole_distance = std::numeric_limits<double>::infinity();
  const bool twisted = !chi.trivial();
  for (const auto& [e, c] : sum.terms()) {
    TermValue t = term_value(e, lx);
    const double mag = std::exp(t.log_mag) * std::fabs(to_double(c));
    const double real = (sgn(c) < 0 ? -1.0 : 1.0) * t.sign * mag;
    double angle = twisted ? 2.0 * std::numbers::pi * to_double(chi.phase(e)) : 0.0;
    for (std::size_t j = 0; j < arg.size(); ++j)
      if (e[j] != 0) angle += to_double(e[j]) * arg[j];
    std::complex<double> v = angle == 0.0 ? std::complex<double>(real, 0.0) : std::polar(real, angle);
    ev.value += v;
    ev.magnitude += mag;
    ev.min_pole_distance = std::min(ev.min_pole_distance, t.pole_distance);
    ++ev.terms;
  }
  ev.conditioning_warning = ev.min_pole_distance <= margin;
  return ev;
}

Evaluation evaluate(const TruncatedSeriesFamily& family, std::span<const Rational> s, std::span<const double> x,
                    int truncation, double margin) {
  if (x.size() != family.exponent.size()) throw NumericError("evaluate", "point has the wrong dimension");
  const auto lx = logs(x);
  Evaluation ev;
  ev.min_pole_distance = std::numeric_limits<double>::infinity();
  for (const auto& k : family.support(truncation)) {
    RationalVector e = family.term_exponent(s, k);
    if (std::any_of(e.begin(), e.end(), [](const Rational& v) { return gamma_term_vanishes(v); })) continue;
    TermValue t = term_value(e, lx);
    const double mag = std::exp(t.log_mag);
    ev.value += t.sign * mag;
    ev.magnitude += mag;
    ev.min_pole_distance = std::min(ev.min_pole_distance, t.pole_distance);
    ++ev.terms;
  }
  ev.conditioning_warning = ev.min_pole_distance <= margin;
  return ev;
}

}  // namespace gkz
