#include "gkz/solutions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>

#include "gkz/errors.hpp"
#include "gkz/polytope.hpp"

namespace gkz {

namespace {

std::string index_set_text(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

std::string shift_text(std::span<const Rational> base, std::span<const Rational> s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Rational d = s[i] - base[i];
    if (d == 0) continue;
    if (!out.empty()) out += " ";
    out += "S" + std::to_string(i + 1);
    if (d != 1) out += "^" + to_string(d);
  }
  return out.empty() ? "the unshifted s" : "shift " + out;
}

std::string vector_text(std::span<const Rational> s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + to_string(s[i]);
  return out + ")";
}

IndexSet drop_last(const IndexSet& face, std::size_t last) {
  IndexSet out;
  for (auto j : face)
    if (j != last) out.push_back(j);
  return out;
}

// Memoized materialization with a genericity guard.
template <class Generic, class Make>
SeriesAt memo_series(std::vector<Rational> base, std::string label, Generic generic, Make make) {
  auto cache = std::make_shared<std::map<RationalVector, TermSum>>();
  return [=](std::span<const Rational> s) -> TermSum {
    RationalVector key(s.begin(), s.end());
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    if (!generic(s))
      throw NumericError("apply_operator", label + " is not generic at " + shift_text(base, s) + ", s = " +
                                               vector_text(s));
    return cache->emplace(std::move(key), make(s)).first->second;
  };
}

SeriesAt branch_series(const SolutionBranch& b, std::span<const Rational> base, int truncation, double margin) {
  return memo_series(
      RationalVector(base.begin(), base.end()), "branch " + b.label(),
      [&b, margin](std::span<const Rational> s) { return b.generic_at(s, margin); },
      [&b, truncation](std::span<const Rational> s) { return b.materialize(s, truncation); });
}

SeriesAt family_series(const TruncatedSeriesFamily& f, std::span<const Rational> base, int truncation, double margin) {
  return memo_series(
      RationalVector(base.begin(), base.end()), "series " + f.leading_monomial(),
      [&f, margin](std::span<const Rational> s) { return genericity_check(f.exponent, s, f.simplex(), margin); },
      [&f, truncation](std::span<const Rational> s) { return materialize(f, s, truncation); });
}

TermSum shifted_derivative(const Operator::Key& k, const SeriesAt& f, std::span<const Rational> s) {
  RationalVector shifted(s.begin(), s.end());
  for (std::size_t i = 0; i < k.shift.size(); ++i) shifted[i] += k.shift[i];
  TermSum t = f(shifted);
  for (std::size_t j = 0; j < k.derivative.size(); ++j)
    for (int r = 0; r < k.derivative[j]; ++r) t = t.derivative(j);
  return t;
}

Applied apply_impl(const Operator& op, const SeriesAt& f, const Character& chi, std::span<const Rational> s,
                   std::span<const double> x, double margin, std::span<const double> arg = {}) {
  Applied out;
  if (exact_route_available(op)) {
    Evaluation ev = evaluate(apply_exact(op, f, s), x, chi, margin, arg);
    out.value = ev.value;
    out.magnitude = ev.magnitude;
    out.exact = true;
    out.conditioning_warning = ev.conditioning_warning;
    return out;
  }
  if (std::any_of(arg.begin(), arg.end(), [](double v) { return v != 0.0; }))
    throw ValidationError("apply_operator", "operators with x in a denominator need a positive real point");
  std::vector<double> values;
  for (const auto& v : s) values.push_back(to_double(v));
  values.insert(values.end(), x.begin(), x.end());
  for (const auto& [k, c] : op.terms()) {
    Evaluation ev = evaluate(shifted_derivative(k, f, s), x, chi, margin);
    const double cv = c.evaluate(values);
    out.value += cv * ev.value;
    out.magnitude += std::fabs(cv) * ev.magnitude;
    out.conditioning_warning = out.conditioning_warning || ev.conditioning_warning;
  }
  return out;
}

Eigen::MatrixXd to_eigen(const IntegerMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

}  // namespace

TruncatedSeriesFamily coset_series(const IntegerPointConfig& a, const StandardPair& pair, int truncation) {
  const IntegerPointConfig h = homogenize(a);
  AffineExponent lam = admissible_exponent(pair, h);
  KernelBasis b = kernel_basis(h, pair.face);
  SublatticeLprime lp = lattice_Lprime(b);
  return dehomogenize(build_series(lam, b, lp, truncation));
}

std::vector<IntegerVector> character_representatives(const IntegerPointConfig& a, const IndexSet& tau) {
  const std::size_t d = a.d();
  const RationalMatrix at = to_rational(a.matrix()).select_columns(tau).transpose();
  auto inv = inverse(at);
  if (!inv) throw ValidationError("characters", "simplex-degenerate face " + index_set_text(tau));
  const Rational det_q = abs(determinant(at));
  const Integer det = det_q.get_num();
  const long bound = det.get_si();
  std::vector<IntegerVector> reps;
  IntegerVector m(d, Integer(0));
  for (;;) {
    bool fresh = true;
    for (const auto& r : reps) {
      RationalVector diff(d);
      for (std::size_t i = 0; i < d; ++i) diff[i] = Rational(m[i] - r[i]);
      RationalVector y = multiply(*inv, diff);
      if (std::all_of(y.begin(), y.end(), [](const Rational& v) { return is_integer(v); })) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(m);
    if (static_cast<long>(reps.size()) == bound) break;
    std::size_t i = d;
    while (i > 0 && m[i - 1] == bound - 1) m[--i] = 0;
    if (i == 0) break;
    ++m[i - 1];
  }
  if (static_cast<long>(reps.size()) != bound)
    throw CertificationError("characters", "found " + std::to_string(reps.size()) + " characters for " +
                                               index_set_text(tau) + ", expected " + to_string(det));
  return reps;
}

std::string SolutionBranch::label() const {
  std::string out = "tau=" + index_set_text(simplex) + " m=(";
  for (std::size_t i = 0; i < character.m.size(); ++i) out += (i ? "," : "") + to_string(character.m[i]);
  return out + ")";
}

bool SolutionBranch::generic_at(std::span<const Rational> s, double margin) const {
  return std::all_of(cosets.begin(), cosets.end(),
                     [&](const TruncatedSeriesFamily& f) { return genericity_check(f.exponent, s, simplex, margin); });
}

TermSum SolutionBranch::materialize(std::span<const Rational> s, int truncation) const {
  TermSum sum(cosets.empty() ? 0 : cosets.front().exponent.size());
  for (const auto& f : cosets) sum += gkz::materialize(f, s, truncation);
  return sum;
}

Evaluation SolutionBranch::evaluate(std::span<const Rational> s, std::span<const double> x, int truncation,
                                    double margin) const {
  return gkz::evaluate(materialize(s, truncation), x, character, margin);
}

std::vector<SolutionBranch> assemble_branches(const IntegerPointConfig& a, const std::vector<StandardPair>& top_pairs,
                                              const std::vector<TruncatedSeriesFamily>& cosets) {
  if (top_pairs.size() != cosets.size()) throw ValidationError("assemble_branches", "one series per pair expected");
  std::map<IndexSet, std::vector<std::size_t>> by_face;
  for (std::size_t i = 0; i < top_pairs.size(); ++i) by_face[top_pairs[i].face].push_back(i);

  std::vector<SolutionBranch> out;
  for (const auto& [face, members] : by_face) {
    const IndexSet tau = drop_last(face, a.n());
    if (tau.size() != a.d())
      throw CertificationError("assemble_branches", "face " + index_set_text(face) + " misses the last index");
    const SublatticeLprime& lp = cosets[members.front()].lattice;
    std::set<IntegerVector> classes;
    for (auto i : members) {
      if (!(cosets[i].lattice == lp))
        throw CertificationError("assemble_branches", "pairs on " + index_set_text(face) + " disagree on L'");
      if (!classes.insert(lp.reduce(cosets[i].offset)).second)
        throw CertificationError("assemble_branches", "two pairs on " + index_set_text(face) +
                                                          " give the same class modulo L': " + to_string(top_pairs[i]));
    }
    const Integer index = lp.index();
    if (Integer(classes.size()) != index || index != simplex_volume(a, tau))
      throw CertificationError("assemble_branches", "face " + index_set_text(face) + " carries " +
                                                        std::to_string(classes.size()) + " pairs, L' has index " +
                                                        to_string(index));
    for (const auto& m : character_representatives(a, tau)) {
      SolutionBranch b;
      b.simplex = tau;
      b.character = Character{tau, m};
      for (auto i : members) {
        b.pairs.push_back(top_pairs[i]);
        b.cosets.push_back(cosets[i]);
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool exact_route_available(const Operator& op) {
  const std::size_t d = op.space().d;
  return std::all_of(op.terms().begin(), op.terms().end(),
                     [d](const auto& t) { return t.second.denominator_free_of(d); });
}

std::vector<std::vector<int>> required_shifts(const Operator& op) {
  std::set<std::vector<int>> out;
  for (const auto& [k, c] : op.terms()) out.insert(k.shift);
  return {out.begin(), out.end()};
}

TermSum apply_exact(const Operator& op, const SeriesAt& f, std::span<const Rational> s) {
  const std::size_t n = op.space().n;
  TermSum out(n);
  for (const auto& [k, c] : op.terms()) {
    const TermSum t = shifted_derivative(k, f, s);
    const Polynomial coeff = c.specialize_prefix(s);
    for (const auto& [alpha, r] : coeff.terms()) {
      TermSum u = t;
      for (std::size_t j = 0; j < n; ++j)
        if (alpha[j] != 0) u = u.times_variable(j, alpha[j]);
      out += u.scaled(r);
    }
  }
  return out;
}

Applied apply_operator(const Operator& op, const SolutionBranch& f, std::span<const Rational> s,
                       std::span<const double> x, int truncation, double margin) {
  return apply_impl(op, branch_series(f, s, truncation, margin), f.character, s, x, margin);
}

Applied apply_operator(const Operator& op, const TruncatedSeriesFamily& f, std::span<const Rational> s,
                       std::span<const double> x, int truncation, double margin) {
  return apply_impl(op, family_series(f, s, truncation, margin), Character{}, s, x, margin);
}

Operator shift_pairing_operator(const IntegerPointConfig& a, std::size_t j) {
  const OperatorSpace sp{a.d(), a.n()};
  Operator op = Operator::d(sp, j);
  Operator::Key k{Exponent(sp.n, 0), std::vector<int>(sp.d, 0)};
  for (std::size_t i = 0; i < sp.d; ++i) k.shift[i] = -static_cast<int>(a(i, j).get_si());
  op.add(k, RationalFunction::constant(sp.nvars(), -1));
  return op;
}

Operator euler_operator(const IntegerPointConfig& a, std::size_t i) {
  const OperatorSpace sp{a.d(), a.n()};
  Operator op = Operator::s(sp, i).scaled(-1);
  for (std::size_t j = 0; j < sp.n; ++j)
    if (a(i, j) != 0) op = op + (Operator::x(sp, j) * Operator::d(sp, j)).scaled(Rational(a(i, j)));
  return op;
}

bool euler_exact(const IntegerPointConfig& a, const SolutionBranch& f, std::span<const Rational> s, int truncation) {
  const RationalMatrix ar = to_rational(a.matrix());
  for (const auto& c : f.cosets) {
    if (!satisfies_euler_identity(c.exponent, a)) return false;
    const RationalMatrix ab = multiply(ar, c.kernel.basis);
    for (std::size_t i = 0; i < ab.rows(); ++i)
      for (std::size_t k = 0; k < ab.cols(); ++k)
        if (ab(i, k) != 0) return false;
  }
  const RationalVector target(s.begin(), s.end());
  const TermSum terms = f.materialize(s, truncation);
  for (const auto& [e, coeff] : terms.terms())
    if (multiply(ar, e) != target) return false;
  // the Euler operators kill every term exactly; they carry no shift
  SeriesAt series = [&](std::span<const Rational> at) {
    return std::equal(at.begin(), at.end(), s.begin(), s.end()) ? terms : f.materialize(at, truncation);
  };
  for (std::size_t i = 0; i < a.d(); ++i)
    if (!apply_exact(euler_operator(a, i), series, s).empty()) return false;
  return true;
}

ShiftResidual check_shift_pairing(const IntegerPointConfig& a, const SolutionBranch& f, std::size_t j,
                                  std::span<const Rational> s, std::span<const double> x, double tolerance, int low,
                                  int high) {
  const Operator op = shift_pairing_operator(a, j);
  ShiftResidual r;
  r.column = j;
  r.low = std::abs(apply_operator(op, f, s, x, low).value);
  r.high = std::abs(apply_operator(op, f, s, x, high).value);
  r.norm = std::abs(f.evaluate(s, x, high).value);
  r.passed = r.high < tolerance * r.norm && (r.high == 0.0 || r.low >= 100.0 * r.high);
  return r;
}

std::vector<ShiftResidual> check_shift_pairings(const IntegerPointConfig& a, const SolutionBranch& f,
                                                std::span<const Rational> s, std::span<const double> x,
                                                double tolerance, int low, int high) {
  // one memo per truncation, shared by all columns
  const SeriesAt lo = branch_series(f, s, low, 1e-3), hi = branch_series(f, s, high, 1e-3);
  const double norm = std::abs(evaluate(hi(s), x, f.character).value);
  std::vector<ShiftResidual> out;
  for (std::size_t j = 0; j < a.n(); ++j) {
    const Operator op = shift_pairing_operator(a, j);
    ShiftResidual r;
    r.column = j;
    r.low = std::abs(apply_impl(op, lo, f.character, s, x, 1e-3).value);
    r.high = std::abs(apply_impl(op, hi, f.character, s, x, 1e-3).value);
    r.norm = norm;
    r.passed = r.high < tolerance * r.norm && (r.high == 0.0 || r.low >= 100.0 * r.high);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool region_member(const IntegerPointConfig& a, const IndexSet& tau, std::span<const double> psi, double r) {
  if (!(r > 0 && r < 1)) throw ValidationError("region", "radius must lie in (0, 1)");
  if (psi.size() != a.n()) throw ValidationError("region", "psi has the wrong length");
  if (tau.size() != a.d() || !inverse(to_rational(a.matrix()).select_columns(tau)))
    throw ValidationError("region", "simplex-degenerate face " + index_set_text(tau));
  const Eigen::MatrixXd am = to_eigen(a.matrix());
  Eigen::MatrixXd at(a.d(), a.d());
  Eigen::VectorXd rhs(a.d());
  for (std::size_t k = 0; k < tau.size(); ++k) {
    at.col(static_cast<Eigen::Index>(k)) = am.col(static_cast<Eigen::Index>(tau[k]));
    rhs(static_cast<Eigen::Index>(k)) = psi[tau[k]];
  }
  const Eigen::VectorXd phi = at.transpose().partialPivLu().solve(rhs);
  const double bound = -std::log(r);
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (std::binary_search(tau.begin(), tau.end(), i)) continue;
    if (!(psi[i] - phi.dot(am.col(static_cast<Eigen::Index>(i))) > bound)) return false;
  }
  return true;
}

EvaluationPoint choose_evaluation_point(const IntegerPointConfig& a, const RationalVector& weight,
                                        const std::vector<IndexSet>& triangulation, double target) {
  const std::size_t n = a.n();
  if (weight.size() != n + 1) throw ValidationError("evaluation_point", "weight must have n + 1 entries");
  if (!(target > 0 && target < 1)) throw ValidationError("evaluation_point", "target must lie in (0, 1)");
  const IntegerPointConfig h = homogenize(a);
  RationalVector w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = weight[j] - weight[n];
  // every kernel direction b of every simplex must see a positive slack <b, psi>
  std::vector<Eigen::VectorXd> dirs;
  for (const auto& tau : triangulation) {
    KernelBasis b = kernel_basis(h, tau);
    for (std::size_t k = 0; k < b.size(); ++k) {
      Rational slack = 0;
      Eigen::VectorXd v(n);
      for (std::size_t j = 0; j < n; ++j) {
        slack += w[j] * b.basis(j, k);
        v(static_cast<Eigen::Index>(j)) = to_double(b.basis(j, k));
      }
      if (slack <= 0)
        throw CertificationError("evaluation_point", "kernel direction of nonpositive weight on " +
                                                         index_set_text(tau));
      dirs.push_back(std::move(v));
    }
  }
  EvaluationPoint p;
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (!dirs.empty()) {
    Eigen::VectorXd omega(n);
    for (std::size_t j = 0; j < n; ++j) omega(static_cast<Eigen::Index>(j)) = to_double(w[j]);
    // The weight alone can leave one slack orders of magnitude below the others,
    // which pushes some coordinates to 1e-30. Blend it with the least-squares
    // direction of equal slacks and keep the most balanced candidate that stays
    // inside the cone.
    Eigen::MatrixXd bt(static_cast<Eigen::Index>(dirs.size()), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < dirs.size(); ++k) bt.row(static_cast<Eigen::Index>(k)) = dirs[k].transpose();
    Eigen::VectorXd even = bt.completeOrthogonalDecomposition().solve(
        Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dirs.size())));
    const Eigen::VectorXd base = omega / (bt * omega).minCoeff();
    auto balance = [&](const Eigen::VectorXd& v) {
      const Eigen::VectorXd sl = bt * v;
      return sl.minCoeff() > 0 ? sl.minCoeff() / sl.maxCoeff() : -1.0;
    };
    psi = base;
    double best = balance(base);
    for (double lambda = 1.0 / 1024; lambda <= 1024; lambda *= 2) {
      const Eigen::VectorXd cand = even + lambda * base;
      const double q = balance(cand);
      if (q > best * (1 + 1e-9)) {
        best = q;
        psi = cand;
      }
    }
    const double b0 = balance(even);
    if (b0 > best) psi = even;
    const double min_slack = (bt * psi).minCoeff();
    p.t = std::log(1.0 / target) / min_slack;
    p.max_torus = target;
    psi *= p.t;
  }
  const Eigen::MatrixXd am = to_eigen(a.matrix());
  // minimize |A^T phi - psi|
  const Eigen::VectorXd phi = (am * am.transpose()).ldlt().solve(am * psi);
  p.phi.assign(phi.data(), phi.data() + phi.size());
  const Eigen::VectorXd logx = am.transpose() * phi - psi;
  for (std::size_t j = 0; j < n; ++j) p.x.push_back(std::exp(logx(static_cast<Eigen::Index>(j))));
  return p;
}

RationalVector sample_generic_s(const std::vector<SolutionBranch>& branches, std::size_t d, std::mt19937_64& rng,
                                const std::vector<std::vector<int>>& shifts, double margin, int max_draws) {
  std::uniform_int_distribution<int> k(1, 96);
  for (int draw = 0; draw < max_draws; ++draw) {
    RationalVector s(d);
    for (auto& v : s) {
      v = Rational(k(rng), 97);
      v.canonicalize();
    }
    bool ok = true;
    for (const auto& b : branches) {
      ok = ok && b.generic_at(s, margin);
      for (const auto& sigma : shifts) {
        if (!ok) break;
        RationalVector t = s;
        for (std::size_t i = 0; i < d; ++i) t[i] += sigma[i];
        ok = b.generic_at(t, margin);
      }
      if (!ok) break;
    }
    if (ok) return s;
  }
  throw NumericError("sample_generic_s", "no generic parameter among " + std::to_string(max_draws) + " draws");
}

// ---------------------------------------------------------------------------

namespace {

// Exponents of total degree `deg` in n variables, lexicographically descending.
void compositions_desc(std::size_t n, int deg, Exponent& cur, std::vector<Exponent>& out) {
  if (cur.size() + 1 == n) {
    cur.push_back(deg);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = deg; first >= 0; --first) {
    cur.push_back(first);
    compositions_desc(n, deg - first, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Operator> default_probes(const IntegerPointConfig& a, const MonomialIdeal& initial, std::size_t count) {
  const std::size_t n = a.n();
  const OperatorSpace sp{a.d(), n};
  std::vector<Operator> out;
  for (int deg = 0; out.size() < count && deg <= 12; ++deg) {
    std::vector<Exponent> level;
    Exponent cur;
    compositions_desc(n, deg, cur, level);
    for (const auto& u : level) {
      Exponent full = u;
      full.push_back(0);
      if (initial.contains(full)) continue;
      Exponent xs(sp.nvars(), 0);
      for (std::size_t j = 0; j < n; ++j) xs[sp.x_var(j)] = u[j];
      Operator op(sp);
      op.add(Operator::Key{u, std::vector<int>(sp.d, 0)}, RationalFunction(Polynomial::monomial(xs)));
      out.push_back(std::move(op));
      if (out.size() == count) break;
    }
  }
  return out;
}

IndependenceCertificate independence_certificate(const std::vector<SolutionBranch>& branches,
                                                 const std::vector<Operator>& probes, std::span<const Rational> s,
                                                 const std::vector<ProbePoint>& points, int truncation,
                                                 double threshold) {
  IndependenceCertificate cert;
  const std::size_t m = branches.size();
  const std::size_t rows = probes.size() * points.size();
  cert.candidates = rows;
  if (m == 0) return cert;

  // Branches are twisted sums of coset series, and on one face the twist is
  // constant along each coset. So branch values factor as V_branch = V_coset T
  // with T block diagonal. Certifying both factors avoids the cancellation of
  // cosets whose sizes differ by many orders of magnitude at the probe point.
  std::vector<const TruncatedSeriesFamily*> cosets;
  std::map<IndexSet, std::vector<std::size_t>> by_face;  // face -> coset columns
  for (const auto& b : branches)
    for (const auto& c : b.cosets) {
      auto& cols = by_face[b.simplex];
      const bool seen = std::any_of(cols.begin(), cols.end(), [&](std::size_t k) {
        return cosets[k]->offset == c.offset && cosets[k]->exponent.constant == c.exponent.constant;
      });
      if (!seen) {
        cols.push_back(cosets.size());
        cosets.push_back(&c);
      }
    }
  const std::size_t q = cosets.size();

  double twist = 1.0;
  for (const auto& [face, cols] : by_face) {
    std::vector<std::size_t> on_face;
    for (std::size_t b = 0; b < m; ++b)
      if (branches[b].simplex == face) on_face.push_back(b);
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cols.size()),
                                                static_cast<Eigen::Index>(on_face.size()));
    for (std::size_t bi = 0; bi < on_face.size(); ++bi) {
      const SolutionBranch& b = branches[on_face[bi]];
      for (const auto& c : b.cosets)
        for (std::size_t ci = 0; ci < cols.size(); ++ci) {
          const TruncatedSeriesFamily& f = *cosets[cols[ci]];
          if (f.offset != c.offset || f.exponent.constant != c.exponent.constant) continue;
          const double angle = 2.0 * std::numbers::pi * to_double(b.character.phase(f.term_exponent(s, f.offset)));
          t(static_cast<Eigen::Index>(ci), static_cast<Eigen::Index>(bi)) += std::polar(1.0, angle);
        }
    }
    if (t.rows() < t.cols()) {
      twist = 0.0;
      break;
    }
    // Hadamard ratio of T: 1 for a character table, 0 when singular
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t);
    double ratio = 1.0;
    for (Eigen::Index k = 0; k < t.cols(); ++k) ratio *= svd.singularValues()(k) / t.col(k).norm();
    twist *= ratio;
  }
  cert.twist_determinant = twist;
  if (rows < q) return cert;

  Eigen::MatrixXcd v(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(q));
  std::vector<std::string> names;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (const auto& probe : probes) names.push_back(probe.to_string() + " at point " + std::to_string(p + 1));
  const Character none;
  for (std::size_t c = 0; c < q; ++c) {
    SeriesAt series = family_series(*cosets[c], s, truncation, 1e-3);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      // the exact route does not depend on the point, so apply it once
      std::optional<TermSum> applied;
      if (exact_route_available(probes[k])) applied = apply_exact(probes[k], series, s);
      for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t r = p * probes.size() + k;
        v(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            applied ? evaluate(*applied, points[p].x, none, 1e-3, points[p].arg).value
                    : apply_impl(probes[k], series, none, s, points[p].x, 1e-3, points[p].arg).value;
      }
    }
  }
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const double mx = v.col(c).cwiseAbs().maxCoeff();
    if (mx == 0.0) return cert;
    v.col(c) /= mx;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(v.transpose());
  const auto& perm = qr.colsPermutation().indices();
  Eigen::MatrixXcd sq(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  for (std::size_t i = 0; i < q; ++i) {
    const Eigen::Index row = perm(static_cast<Eigen::Index>(i));
    sq.row(static_cast<Eigen::Index>(i)) = v.row(row) / v.row(row).norm();
    cert.probes.push_back(names[static_cast<std::size_t>(row)]);
  }
  cert.coset_determinant = std::abs(sq.partialPivLu().determinant());
  if (!std::isfinite(cert.coset_determinant)) cert.coset_determinant = 0.0;
  // q >= m whenever the twist has full column rank
  cert.determinant = cert.coset_determinant * twist;
  cert.certified = cert.determinant > threshold;
  return cert;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<std::size_t, std::size_t> trimmed(std::string_view text, std::size_t begin, std::size_t end) {
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return {begin, end};
}

}  // namespace

Relation parse_relation(std::string_view text, OperatorSpace space) {
  Relation rel;
  bool have_shift = false, have_vector = false;
  std::size_t line_start = 0;
  std::size_t last_line = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::size_t content_end = std::min(line_end, text.find('#', line_start));
    auto [b, e] = trimmed(text, line_start, content_end);
    if (b < e) {
      last_line = b;
      const std::size_t colon = text.find(':', b);
      if (colon == std::string_view::npos || colon >= e) throw ParseError("relation", "expected 'key:'", b);
      auto [kb, ke] = trimmed(text, b, colon);
      const std::string key(text.substr(kb, ke - kb));
      std::vector<Operator> items;
      std::vector<std::string> sources;
      std::size_t item = colon + 1;
      for (;;) {
        std::size_t stop = text.find(';', item);
        if (stop == std::string_view::npos || stop > e) stop = e;
        auto [ib, ie] = trimmed(text, item, stop);
        if (ib == ie) throw ParseError("relation", "empty entry", ib);
        try {
          items.push_back(parse_operator(text.substr(ib, ie - ib), space));
        } catch (const ParseError& err) {
          throw ParseError("relation", err.detail(), ib + err.position());
        }
        sources.emplace_back(text.substr(ib, ie - ib));
        if (stop == e) break;
        item = stop + 1;
      }
      if (key == "shift") {
        if (have_shift || items.size() != 1) throw ParseError("relation", "exactly one shift expected", b);
        rel.shift = items.front();
        have_shift = true;
      } else if (key == "vector") {
        if (have_vector) throw ParseError("relation", "vector given twice", b);
        rel.vector = std::move(items);
        have_vector = true;
      } else if (key == "row") {
        rel.matrix.push_back(std::move(items));
        rel.entries.push_back(std::move(sources));
      } else {
        throw ParseError("relation", "unknown key '" + key + "'", kb);
      }
    }
    line_start = line_end + 1;
  }
  if (!have_shift) throw ParseError("relation", "missing 'shift:' line", text.size());
  if (!have_vector) throw ParseError("relation", "missing 'vector:' line", text.size());
  if (rel.matrix.size() != rel.vector.size())
    throw ParseError("relation", "expected " + std::to_string(rel.vector.size()) + " rows, got " +
                                     std::to_string(rel.matrix.size()), last_line);
  for (const auto& row : rel.matrix)
    if (row.size() != rel.vector.size())
      throw ParseError("relation", "every row needs " + std::to_string(rel.vector.size()) + " entries", last_line);
  return rel;
}

std::string to_string(const Relation& r) {
  auto join = [](const std::vector<Operator>& ops) {
    std::string s;
    for (const auto& o : ops) s += (s.empty() ? "" : " ; ") + o.to_string();
    return s;
  };
  std::string out = "shift: " + r.shift.to_string() + "\nvector: " + join(r.vector) + "\n";
  for (const auto& row : r.matrix) out += "row: " + join(row) + "\n";
  return out;
}

RelationReport check_relation(const Relation& relation, const std::vector<SolutionBranch>& branches,
                              std::span<const Rational> s, std::span<const double> x, int truncation,
                              double margin) {
  RelationReport report;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    SeriesAt series = branch_series(branches[b], s, truncation, margin);
    const Character& chi = branches[b].character;
    for (std::size_t i = 0; i < relation.vector.size(); ++i) {
      const Applied lhs = apply_impl(relation.shift * relation.vector[i], series, chi, s, x, margin);
      std::complex<double> rhs = 0.0;
      double scale = std::abs(lhs.value), rhs_mag = 0.0;
      for (std::size_t k = 0; k < relation.vector.size(); ++k) {
        if (relation.matrix[i][k].is_zero()) continue;
        const Applied t = apply_impl(relation.matrix[i][k] * relation.vector[k], series, chi, s, x, margin);
        rhs += t.value;
        rhs_mag += std::abs(t.value);
      }
      scale = std::max(scale, rhs_mag);
      RelationResidual r{b, i, scale == 0.0 ? 0.0 : std::abs(lhs.value - rhs) / scale};
      report.max_residual = std::max(report.max_residual, r.residual);
      report.residuals.push_back(r);
    }
  }
  return report;
}

}  // namespace gkz
