#include <cmath>
#include <set>

#include "corpus.hpp"
#include "doctest.h"
#include "gkz/errors.hpp"
#include "gkz/polytope.hpp"
#include "gkz/series.hpp"
#include "gkz/standard_pairs.hpp"

using namespace gkz;

namespace {

const IntegerPointConfig& example_ht() {
  static const IntegerPointConfig h = homogenize(testing::row_123());
  return h;
}

StandardPair pair_of(Exponent root, IndexSet face) { return StandardPair{std::move(root), std::move(face)}; }

TruncatedSeriesFamily family_for(const IntegerPointConfig& h, const StandardPair& p, int n) {
  AffineExponent lam = admissible_exponent(p, h);
  KernelBasis b = kernel_basis(h, p.face);
  return build_series(lam, b, lattice_Lprime(b), n);
}

AffineExponent affine(std::vector<Rational> c, std::vector<std::vector<Rational>> m, std::size_t first) {
  AffineExponent a;
  a.constant = std::move(c);
  a.matrix = RationalMatrix::from_rows(m);
  a.first_parameter = first;
  return a;
}

// The dehomogenized (1, {3,4}) series written out by hand:
// x3^(s/3) sum (x1 x3^(-1/3))^k1 (x2 x3^(-2/3))^k2 / (k1! k2! Gamma((s - k1 - 2 k2)/3 + 1)),
// summed over k1 = k2 mod 3.
double phi2_oracle(double s, const std::vector<double>& x, int n) {
  double sum = 0.0;
  for (int t = 0; t <= n; ++t)
    for (int k1 = 0; k1 <= t; ++k1) {
      const int k2 = t - k1;
      if ((k1 - k2) % 3 != 0) continue;
      const double e3 = (s - k1 - 2.0 * k2) / 3.0;
      const double g = std::tgamma(e3 + 1.0);
      sum += std::pow(x[0], k1) * std::pow(x[1], k2) * std::pow(x[2], e3) /
             (std::tgamma(k1 + 1.0) * std::tgamma(k2 + 1.0) * g);
    }
  return sum;
}

}  // namespace

TEST_CASE("admissible exponents of the example") {
  const auto& h = example_ht();
  const Rational third(1, 3);
  CHECK(admissible_exponent(pair_of({0, 0, 0, 0}, {2, 3}), h) ==
        affine({0, 0, 0, 0}, {{0, 0}, {0, 0}, {0, third}, {1, -third}}, 0));
  CHECK(admissible_exponent(pair_of({0, 1, 0, 0}, {2, 3}), h) ==
        affine({0, 1, Rational(-2, 3), Rational(-1, 3)}, {{0, 0}, {0, 0}, {0, third}, {1, -third}}, 0));
  for (const auto& p : {pair_of({0, 0, 0, 0}, {2, 3}), pair_of({0, 1, 0, 0}, {2, 3}), pair_of({0, 2, 0, 0}, {2, 3})})
    CHECK(satisfies_euler_identity(admissible_exponent(p, h), h));
  CHECK(admissible_exponent(pair_of({0, 0, 0, 0}, {2, 3}), h).coordinate_to_string(3) == "s0 - 1/3 s1");
}

TEST_CASE("admissible exponent: identity and degenerate faces") {
  auto id = IntegerPointConfig::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto lam = admissible_exponent(pair_of({0, 0, 0}, {0, 1, 2}), id, 1);
  CHECK(lam.constant == RationalVector(3, Rational(0)));
  CHECK(lam.matrix == RationalMatrix::identity(3));
  auto a = IntegerPointConfig::from_rows({{1, 1, 1}, {1, 1, 2}});
  CHECK_THROWS_AS(admissible_exponent(pair_of({0, 0, 0}, {0, 1}), a), ValidationError);
}

TEST_CASE("genericity") {
  auto lam = admissible_exponent(pair_of({0, 0, 0, 0}, {2, 3}), example_ht());
  const IndexSet tau{2};
  RationalVector s{Rational(0), Rational(1, 2)};
  CHECK(genericity_check(lam, s, tau));
  s[1] = 3;
  CHECK_FALSE(genericity_check(lam, s, tau));
  s[1] = Rational(3001, 1000);  // within the margin of an integer
  CHECK_FALSE(genericity_check(lam, s, tau));
  int generic = 0;
  for (int k = 1; k <= 96; ++k) {
    s[1] = Rational(k, 97);
    s[1].canonicalize();
    generic += genericity_check(lam, s, tau) ? 1 : 0;
  }
  CHECK(generic == 96);
}

TEST_CASE("support of the (1,{3,4}) series agrees with the definition of L'") {
  auto fam = family_for(example_ht(), pair_of({0, 0, 0, 0}, {2, 3}), 4);
  CHECK(fam.offset == IntegerVector{0, 0});
  std::set<IntegerVector> got;
  for (const auto& k : fam.support()) got.insert(k);
  std::set<IntegerVector> want;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      IntegerVector k{a, b};
      if (in_Lprime_by_definition(fam.kernel, k)) want.insert(k);
    }
  CHECK(got == want);
  CHECK(got == std::set<IntegerVector>{{0, 0}, {1, 1}, {3, 0}, {0, 3}, {2, 2}});
  // sorted by |k'|_1 then lexicographically
  auto sup = fam.support();
  for (std::size_t i = 1; i < sup.size(); ++i) {
    Integer a = sup[i - 1][0] + sup[i - 1][1], b = sup[i][0] + sup[i][1];
    CHECK((a < b || (a == b && sup[i - 1] < sup[i])));
  }
}

TEST_CASE("materialized exponents satisfy the Euler identity exactly") {
  const auto& h = example_ht();
  RationalVector s{Rational(2, 7), Rational(5, 97)};
  for (const auto& p : {pair_of({0, 0, 0, 0}, {2, 3}), pair_of({0, 1, 0, 0}, {2, 3}), pair_of({0, 2, 0, 0}, {2, 3})}) {
    auto fam = family_for(h, p, 12);
    CHECK(fam.offset == IntegerVector{p.root[0], p.root[1]});
    for (const auto& k : fam.support()) {
      RationalVector e = fam.term_exponent(s, k);
      CHECK(multiply(to_rational(h.matrix()), e) == s);
      CHECK(e[0] == k[0]);
      CHECK(e[1] == k[1]);
    }
  }
}

TEST_CASE("dehomogenized example series") {
  const auto& h = example_ht();
  auto phi2 = dehomogenize(family_for(h, pair_of({0, 0, 0, 0}, {2, 3}), 40));
  auto phi1 = dehomogenize(family_for(h, pair_of({0, 1, 0, 0}, {2, 3}), 40));
  auto phi3 = dehomogenize(family_for(h, pair_of({0, 2, 0, 0}, {2, 3}), 40));
  CHECK(phi2.leading_monomial() == "x3^(1/3 s1)");
  CHECK(phi1.leading_monomial() == "x2 x3^(1/3 s1 - 2/3)");
  CHECK(phi3.leading_monomial() == "x2^2 x3^(1/3 s1 - 4/3)");
  CHECK(phi2.simplex() == IndexSet{2});
  CHECK(phi2.exponent.first_parameter == 1);
  CHECK(phi2.exponent.parameters() == 1);

  // support is unchanged by forgetting x4
  auto tilde = family_for(h, pair_of({0, 0, 0, 0}, {2, 3}), 40);
  CHECK(tilde.support() == phi2.support());

  const RationalVector s{Rational(1, 2)};
  const std::vector<double> x{0.1, 0.05, 1.0};
  const double want = phi2_oracle(0.5, x, 40);
  Evaluation ev = evaluate(phi2, s, x, 40);
  CHECK(ev.value.real() == doctest::Approx(want).epsilon(1e-12));
  CHECK(ev.value.imag() == 0.0);
  CHECK_FALSE(ev.conditioning_warning);

  // self-convergence
  const double v20 = evaluate(phi2, s, x, 20).value.real();
  const double v30 = evaluate(phi2, s, x, 30).value.real();
  const double v40 = ev.value.real();
  CHECK(std::fabs(v20 - v40) <= 1e-12 * std::fabs(v40));
  CHECK(std::fabs(v30 - v40) <= 1e-12 * std::fabs(v40));

  CHECK_THROWS_AS(dehomogenize(phi2), ValidationError);
}

TEST_CASE("torus factorization") {
  const auto& h = example_ht();
  auto phi1 = dehomogenize(family_for(h, pair_of({0, 1, 0, 0}, {2, 3}), 30));
  const RationalVector s{Rational(13, 97)};
  const std::vector<double> x{0.08, 0.03, 0.9};
  for (double mu : {0.7, 1.3, 2.0}) {
    std::vector<double> y{x[0] * mu, x[1] * mu * mu, x[2] * mu * mu * mu};
    const double fx = evaluate(phi1, s, x, 30).value.real();
    const double fy = evaluate(phi1, s, y, 30).value.real();
    CHECK(fy == doctest::Approx(std::pow(mu, 13.0 / 97) * fx).epsilon(1e-12));
  }
}

TEST_CASE("pole convention zeroes exactly the pole terms") {
  const auto& h = example_ht();
  auto phi2 = dehomogenize(family_for(h, pair_of({0, 0, 0, 0}, {2, 3}), 30));
  const RationalVector s{Rational(6)};
  TermSum sum = materialize(phi2, s, 30);
  std::size_t survivors = 0;
  for (const auto& k : phi2.support())
    if (k[0] + 2 * k[1] <= 6) ++survivors;
  CHECK(sum.size() == survivors);
  // what survives is the polynomial x3^2 sum over k1 + 2 k2 <= 6
  const std::vector<double> x{0.3, 0.2, 1.5};
  double poly = 0.0;
  for (const auto& k : phi2.support()) {
    const long k1 = k[0].get_si(), k2 = k[1].get_si();
    if (k1 + 2 * k2 > 6) continue;
    const double e3 = 2.0 - (k1 + 2.0 * k2) / 3.0;
    poly += std::pow(x[0], k1) * std::pow(x[1], k2) * std::pow(x[2], e3) /
            (std::tgamma(k1 + 1.0) * std::tgamma(k2 + 1.0) * std::tgamma(e3 + 1.0));
  }
  CHECK(evaluate(sum, x).value.real() == doctest::Approx(poly).epsilon(1e-13));
  CHECK(evaluate(phi2, s, x, 30).value.real() == doctest::Approx(poly).epsilon(1e-13));

  // near a pole the result carries a conditioning warning
  const RationalVector near{Rational(-3) + Rational(1, 10000)};
  CHECK(evaluate(phi2, near, x, 30).conditioning_warning);
}

TEST_CASE("empty kernel gives a single term") {
  auto h = homogenize(IntegerPointConfig::from_rows({{1, 0}, {0, 1}}));
  auto fam = dehomogenize(family_for(h, pair_of({0, 0, 0}, {0, 1, 2}), 10));
  CHECK(fam.kernel.size() == 0);
  CHECK(fam.support().size() == 1);
  CHECK(fam.leading_monomial() == "x1^(s1) x2^(s2)");
  const RationalVector s{Rational(1, 3), Rational(-5, 7)};
  const std::vector<double> x{0.4, 2.5};
  const double want = std::pow(0.4, 1.0 / 3) * std::pow(2.5, -5.0 / 7) /
                      (std::tgamma(1.0 + 1.0 / 3) * std::tgamma(1.0 - 5.0 / 7));
  CHECK(evaluate(fam, s, x, 10).value.real() == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("build_series rejects non-admissible exponents") {
  const auto& h = example_ht();
  auto lam = admissible_exponent(pair_of({0, 0, 0, 0}, {2, 3}), h);
  KernelBasis wrong = kernel_basis(h, IndexSet{0, 3});
  CHECK_THROWS_AS(build_series(lam, wrong, lattice_Lprime(wrong), 5), ValidationError);
  KernelBasis b = kernel_basis(h, IndexSet{2, 3});
  CHECK_THROWS_AS(build_series(lam, b, lattice_Lprime(b), -1), ValidationError);
  lam.constant[0] = Rational(1, 2);
  CHECK_THROWS_AS(build_series(lam, b, lattice_Lprime(b), 5), ValidationError);
}

TEST_CASE("TermSum calculus") {
  TermSum f(2);
  f.add({Rational(1, 2), Rational(2)}, Rational(3));
  f.add({Rational(-1), Rational(0)}, Rational(1));  // pole: never stored
  CHECK(f.size() == 1);
  // d1 then x1 is theta_1 + ... : x1 d1 (x^e / Gamma(e+1)) = e1 x^e / Gamma(e+1)
  TermSum g = f.derivative(0).times_variable(0, 1);
  CHECK(g.terms().begin()->second == Rational(3, 2));
  CHECK(g.terms().begin()->first == f.terms().begin()->first);
  // x1^-1 undoes x1
  TermSum back = f.times_variable(0, 1).times_variable(0, -1);
  CHECK(back.terms() == f.terms());
  // d2 three times drops the x2^2 term
  CHECK(f.derivative(1).derivative(1).derivative(1).empty());
  TermSum z = f;
  z -= f;
  CHECK(z.empty());
  TermSum c(1);
  c.add({Rational(0)}, Rational(1));
  CHECK_THROWS_AS(c.times_variable(0, -1), NumericError);
}

TEST_CASE("characters") {
  Character chi{{2}, {1}};
  CHECK(chi.phase({Rational(0), Rational(0), Rational(7, 3)}) == Rational(1, 3));
  CHECK_FALSE(chi.trivial());
  CHECK(Character{}.trivial());
  TermSum f(3);
  f.add({Rational(0), Rational(0), Rational(1, 3)}, Rational(1));
  const std::vector<double> x{1.0, 1.0, 1.0};
  auto plain = evaluate(f, x);
  auto twisted = evaluate(f, x, chi);
  CHECK(std::abs(twisted.value) == doctest::Approx(std::abs(plain.value)));
  CHECK(std::arg(twisted.value) == doctest::Approx(2 * 3.141592653589793 / 3));
}
