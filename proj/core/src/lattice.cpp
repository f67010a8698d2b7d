#include "gkz/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "gkz/errors.hpp"

namespace gkz {

IntegerPointConfig::IntegerPointConfig(IntegerMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0)
    throw ValidationError("matrix", "point configuration needs at least one row and one column");
}

IntegerPointConfig IntegerPointConfig::from_rows(const std::vector<std::vector<long>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw ValidationError("matrix", "point configuration needs at least one row and one column");
  IntegerMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw ValidationError("matrix", "row " + std::to_string(i + 1) + " has the wrong length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = Integer(rows[i][j]);
  }
  return IntegerPointConfig(std::move(m));
}

bool IntegerPointConfig::is_homogeneous() const {
  for (std::size_t i = 0; i < d(); ++i) {
    bool all_ones = true;
    for (std::size_t j = 0; j < n() && all_ones; ++j) all_ones = entries_(i, j) == 1;
    if (all_ones) return true;
  }
  return false;
}

bool IntegerPointConfig::has_zero_column() const {
  for (std::size_t j = 0; j < n(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < d() && zero; ++i) zero = entries_(i, j) == 0;
    if (zero) return true;
  }
  return false;
}

std::size_t IntegerPointConfig::rank() const { return gkz::rank(to_rational(entries_)); }

void IntegerPointConfig::validate() const {
  for (std::size_t j = 0; j < n(); ++j) {
    bool zero = true;
    for (std::size_t i = 0; i < d() && zero; ++i) zero = entries_(i, j) == 0;
    if (zero) throw ValidationError("matrix", "column " + std::to_string(j + 1) + " is zero");
  }
  if (!generates_lattice(*this))
    throw ValidationError("matrix", "columns do not generate the integer lattice Z^" + std::to_string(d()));
}

IntegerVector smith_invariants(IntegerMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  IntegerVector diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block goes to (t, t)
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m(i, j) != 0 && (pi == rows || abs(m(i, j)) < abs(m(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) {
        std::sort(diag.begin(), diag.end());
        return diag;
      }
      m.swap_rows(t, pi);
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, t), m(i, pj));

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility: fold an offending row into row t and repeat
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m(i, j) % m(t, t) != 0) {
            for (std::size_t k = t; k < cols; ++k) m(t, k) += m(i, k);
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(abs(m(t, t)));
  }
  std::sort(diag.begin(), diag.end());
  return diag;
}

IntegerMatrix hermite_normal_form(IntegerMatrix g) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    for (;;) {
      std::size_t best = rows;
      for (std::size_t i = pivot_row; i < rows; ++i)
        if (g(i, c) != 0 && (best == rows || abs(g(i, c)) < abs(g(best, c)))) best = i;
      if (best == rows) break;
      g.swap_rows(pivot_row, best);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < rows; ++i) {
        if (g(i, c) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), g(i, c).get_mpz_t(), g(pivot_row, c).get_mpz_t());
        for (std::size_t j = c; j < cols; ++j) g(i, j) -= q * g(pivot_row, j);
        if (g(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (g(pivot_row, c) == 0) continue;
    if (g(pivot_row, c) < 0)
      for (std::size_t j = c; j < cols; ++j) g(pivot_row, j) = -g(pivot_row, j);
    for (std::size_t i = 0; i < pivot_row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), g(i, c).get_mpz_t(), g(pivot_row, c).get_mpz_t());
      if (q != 0)
        for (std::size_t j = c; j < cols; ++j) g(i, j) -= q * g(pivot_row, j);
    }
    pivot_cols.push_back(c);
    ++pivot_row;
  }
  IntegerMatrix h(pivot_row, cols);
  for (std::size_t i = 0; i < pivot_row; ++i)
    for (std::size_t j = 0; j < cols; ++j) h(i, j) = g(i, j);
  return h;
}

IntegerMatrix integer_kernel(const IntegerMatrix& a) {
  const std::size_t d = a.rows();
  const std::size_t n = a.cols();
  // Unimodular row reduction of [A^T | I]: rows whose A^T part vanishes span the kernel.
  IntegerMatrix m(n, d + n, Integer(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < d; ++i) m(j, i) = a(i, j);
    m(j, d + j) = 1;
  }
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < d && pivot_row < n; ++c) {
    for (;;) {
      std::size_t best = n;
      for (std::size_t i = pivot_row; i < n; ++i)
        if (m(i, c) != 0 && (best == n || abs(m(i, c)) < abs(m(best, c)))) best = i;
      if (best == n) break;
      m.swap_rows(pivot_row, best);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < n; ++i) {
        if (m(i, c) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), m(i, c).get_mpz_t(), m(pivot_row, c).get_mpz_t());
        for (std::size_t j = 0; j < d + n; ++j) m(i, j) -= q * m(pivot_row, j);
        if (m(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (m(pivot_row, c) != 0) ++pivot_row;
  }
  IntegerMatrix k(n - pivot_row, n);
  for (std::size_t i = pivot_row; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - pivot_row, j) = m(i, d + j);
  if (k.rows() == 0) return IntegerMatrix(0, n);
  return hermite_normal_form(std::move(k));
}

bool generates_lattice(const IntegerPointConfig& a) {
  if (a.rank() < a.d())
    throw ValidationError("matrix", "rank " + std::to_string(a.rank()) + " is less than the row count " +
                                        std::to_string(a.d()));
  auto inv = smith_invariants(a.matrix());
  return std::all_of(inv.begin(), inv.end(), [](const Integer& v) { return v == 1; });
}

IntegerPointConfig homogenize(const IntegerPointConfig& a) {
  IntegerMatrix h(a.d() + 1, a.n() + 1, Integer(0));
  for (std::size_t j = 0; j <= a.n(); ++j) h(0, j) = 1;
  for (std::size_t i = 0; i < a.d(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) h(i + 1, j) = a(i, j);
  return IntegerPointConfig(std::move(h));
}

RationalVector KernelBasis::combination(std::span<const Integer> k) const {
  RationalVector out(ambient(), Rational(0));
  for (std::size_t i = 0; i < size(); ++i) {
    if (k[i] == 0) continue;
    for (std::size_t j = 0; j < ambient(); ++j) out[j] += basis(j, i) * k[i];
  }
  return out;
}

RationalVector KernelBasis::combination(std::span<const Rational> k) const {
  RationalVector out(ambient(), Rational(0));
  for (std::size_t i = 0; i < size(); ++i) {
    if (k[i] == 0) continue;
    for (std::size_t j = 0; j < ambient(); ++j) out[j] += basis(j, i) * k[i];
  }
  return out;
}

namespace {

IndexSet complement(const IndexSet& s, std::size_t n) {
  IndexSet out;
  for (std::size_t j = 0; j < n; ++j)
    if (!std::binary_search(s.begin(), s.end(), j)) out.push_back(j);
  return out;
}

KernelBasis build_kernel_basis(const IntegerPointConfig& a, IndexSet simplex) {
  std::sort(simplex.begin(), simplex.end());
  const RationalMatrix ar = to_rational(a.matrix());
  auto inv = inverse(ar.select_columns(simplex));
  if (!inv) {
    std::string s;
    for (auto j : simplex) s += (s.empty() ? "" : ",") + std::to_string(j + 1);
    throw ValidationError("kernel_basis", "simplex-degenerate: columns {" + s + "} are linearly dependent");
  }
  KernelBasis kb;
  kb.simplex = simplex;
  kb.identity_rows = complement(simplex, a.n());
  kb.column_permutation = kb.identity_rows;
  kb.column_permutation.insert(kb.column_permutation.end(), simplex.begin(), simplex.end());
  kb.basis = RationalMatrix(a.n(), kb.identity_rows.size(), Rational(0));
  for (std::size_t i = 0; i < kb.identity_rows.size(); ++i) {
    const std::size_t r = kb.identity_rows[i];
    kb.basis(r, i) = 1;
    RationalVector col = ar.column(r);
    RationalVector sol = multiply(*inv, col);
    for (std::size_t t = 0; t < simplex.size(); ++t) kb.basis(simplex[t], i) = -sol[t];
  }
  return kb;
}

}  // namespace

KernelBasis kernel_basis(const IntegerPointConfig& a, std::optional<IndexSet> simplex) {
  if (a.rank() < a.d()) throw ValidationError("kernel_basis", "matrix is rank deficient");
  if (simplex) {
    if (simplex->size() != a.d())
      throw ValidationError("kernel_basis", "simplex must have exactly d = " + std::to_string(a.d()) + " indices");
    for (auto j : *simplex)
      if (j >= a.n()) throw ValidationError("kernel_basis", "simplex index out of range");
    return build_kernel_basis(a, *simplex);
  }
  // greedy leftmost identity rows whose complement stays of full rank
  const RationalMatrix ar = to_rational(a.matrix());
  IndexSet identity;
  for (std::size_t j = 0; j < a.n() && identity.size() < a.n() - a.d(); ++j) {
    IndexSet trial = identity;
    trial.push_back(j);
    IndexSet rest = complement(trial, a.n());
    if (rank(ar.select_columns(rest)) == a.d()) identity = trial;
  }
  return build_kernel_basis(a, complement(identity, a.n()));
}

KernelBasis kernel_basis_with_identity_rows(const IntegerPointConfig& a, const IndexSet& identity_rows) {
  IndexSet sorted = identity_rows;
  std::sort(sorted.begin(), sorted.end());
  return kernel_basis(a, complement(sorted, a.n()));
}

SublatticeLprime::SublatticeLprime(IntegerMatrix hermite_basis)
    : hnf_(std::move(hermite_basis)), dimension_(hnf_.cols()) {}

bool SublatticeLprime::contains(std::span<const Integer> k) const {
  IntegerVector r = reduce(k);
  return std::all_of(r.begin(), r.end(), [](const Integer& v) { return v == 0; });
}

IntegerVector SublatticeLprime::reduce(std::span<const Integer> k) const {
  IntegerVector r(k.begin(), k.end());
  // L' has full rank, so the Hermite basis is square upper triangular.
  for (std::size_t i = 0; i < hnf_.rows(); ++i) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r[i].get_mpz_t(), hnf_(i, i).get_mpz_t());
    if (q != 0)
      for (std::size_t j = i; j < dimension_; ++j) r[j] -= q * hnf_(i, j);
  }
  return r;
}

Integer SublatticeLprime::index() const {
  Integer idx = 1;
  for (std::size_t i = 0; i < hnf_.rows(); ++i) idx *= hnf_(i, i);
  return idx;
}

SublatticeLprime lattice_Lprime(const KernelBasis& b) {
  const std::size_t m = b.size();
  const std::size_t n = b.ambient();
  if (m == 0) return SublatticeLprime(IntegerMatrix(0, 0));
  Integer denom = 1;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), b.basis(j, i).get_den_mpz_t());
  // {(k, y) : (D B) k - D y = 0}, projected onto k
  IntegerMatrix x(n, m + n, Integer(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      Rational v = b.basis(j, i) * denom;
      x(j, i) = v.get_num();
    }
    x(j, m + j) = -denom;
  }
  IntegerMatrix ker = integer_kernel(x);
  IntegerMatrix proj(ker.rows(), m);
  for (std::size_t r = 0; r < ker.rows(); ++r)
    for (std::size_t i = 0; i < m; ++i) proj(r, i) = ker(r, i);
  IntegerMatrix h = hermite_normal_form(std::move(proj));
  if (h.rows() != m) throw CertificationError("lattice_Lprime", "sublattice is not of full rank");
  return SublatticeLprime(std::move(h));
}

bool in_Lprime_by_definition(const KernelBasis& b, std::span<const Integer> k) {
  RationalVector v = b.combination(k);
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integer(x); });
}

std::vector<std::vector<std::int64_t>> enumerate_kernel_box(const IntegerPointConfig& a, std::int64_t bound) {
  if (bound < 1) throw ValidationError("enumerate_kernel_box", "bound must be at least 1");
  const std::size_t d = a.d();
  const std::size_t n = a.n();
  std::vector<std::vector<std::int64_t>> cols(n, std::vector<std::int64_t>(d));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < d; ++i) cols[j][i] = a(i, j).get_si();

  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> l(n, -bound);
  std::vector<std::int64_t> acc(d, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < d; ++i) acc[i] -= bound * cols[j][i];
  for (;;) {
    if (std::all_of(acc.begin(), acc.end(), [](std::int64_t v) { return v == 0; })) out.push_back(l);
    std::size_t j = 0;
    while (j < n && l[j] == bound) {
      for (std::size_t i = 0; i < d; ++i) acc[i] -= 2 * bound * cols[j][i];
      l[j] = -bound;
      ++j;
    }
    if (j == n) break;
    ++l[j];
    for (std::size_t i = 0; i < d; ++i) acc[i] += cols[j][i];
  }
  return out;
}

}  // namespace gkz
