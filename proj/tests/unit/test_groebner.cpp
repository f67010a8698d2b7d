#include <algorithm>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "gkz/errors.hpp"
#include "gkz/groebner.hpp"

#include <nlohmann/json.hpp>

using namespace gkz;

namespace {

Polynomial P(const char* text, std::size_t n) { return Polynomial::parse(text, n); }

bool in_ideal(const Polynomial& f, const std::vector<Polynomial>& gb, const MatrixTermOrder& order) {
  return normal_form(f, gb, order).is_zero();
}

}  // namespace

TEST_CASE("polynomial parse and print") {
  Polynomial p = P("3/2 d1^2 d3 - d2^3", 3);
  CHECK(p.coefficient({2, 0, 1}) == Rational(3, 2));
  CHECK(p.coefficient({0, 3, 0}) == -1);
  CHECK(Polynomial::parse(p.to_string(), 3) == p);
  CHECK(P("d1*d2 + 2*d1 - 1", 2).size() == 3);
  CHECK(P("d1 - d1", 2).is_zero());
  CHECK_THROWS_AS(P("d4", 3), ParseError);
  CHECK_THROWS_AS(P("d1 + ", 3), ParseError);
  CHECK_THROWS_AS(P("1/0 d1", 3), ParseError);
  CHECK(polynomial_from_json(to_json(p), 3) == p);
}

TEST_CASE("term order basics") {
  auto grev = MatrixTermOrder::grevlex(3);
  CHECK(grev.compare({1, 0, 0}, {0, 1, 0}) > 0);
  CHECK(grev.compare({1, 0, 1}, {0, 2, 0}) < 0);  // grevlex: the larger last exponent is smaller
  CHECK(grev.compare({0, 0, 2}, {1, 0, 0}) > 0);
  MatrixTermOrder w(3, {{Rational(1, 3), 0, 1}});
  CHECK(w.compare({1, 0, 0}, {0, 5, 0}) > 0);
  CHECK(w.is_well_order());
  CHECK_FALSE(MatrixTermOrder(2, {{-1, 1}}).is_well_order());
  CHECK(MatrixTermOrder(2, {{1, 0}, {0, -1}}).is_well_order() == false);
}

TEST_CASE("single generator is its own reduced basis") {
  auto gb = buchberger({P("d1 - d2", 2)}, MatrixTermOrder::grevlex(2));
  REQUIRE(gb.size() == 1);
  CHECK(gb[0] == P("d1 - d2", 2));
  auto gb2 = buchberger({P("2 d2 - 2 d1", 2)}, MatrixTermOrder::grevlex(2));
  CHECK(gb2 == gb);
}

TEST_CASE("S-polynomial by hand") {
  auto grev = MatrixTermOrder::grevlex(2);
  // S(d1^2 - d2, d1 d2 - 1) = d2 (d1^2 - d2) - d1 (d1 d2 - 1) = d1 - d2^2
  CHECK(s_polynomial(P("d1^2 - d2", 2), P("d1 d2 - 1", 2), grev) == P("d1 - d2^2", 2));
}

TEST_CASE("buchberger criterion holds on random ideals") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> e(0, 2), c(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Polynomial> gens;
    for (int g = 0; g < 3; ++g) {
      Polynomial p(3);
      for (int t = 0; t < 3; ++t) p.add_term({e(rng), e(rng), e(rng)}, Rational(c(rng)));
      gens.push_back(p);
    }
    auto order = trial % 2 ? MatrixTermOrder::grevlex(3) : MatrixTermOrder(3, {{1, 2, 3}});
    auto gb = buchberger(gens, order);
    CHECK(is_groebner_basis(gb, order));
    for (const auto& g : gens) CHECK(in_ideal(g, gb, order));
    // reduced: no term of any element is divisible by another leading monomial
    for (std::size_t i = 0; i < gb.size(); ++i) {
      CHECK(leading_coefficient(gb[i], order) == 1);
      for (std::size_t j = 0; j < gb.size(); ++j) {
        if (i == j) continue;
        Exponent lj = leading_monomial(gb[j], order);
        for (const auto& [ex, co] : gb[i].terms()) CHECK_FALSE(divides(lj, ex));
      }
    }
  }
}

TEST_CASE("saturation examples") {
  auto grev = MatrixTermOrder::grevlex(2);
  auto sat = saturate({P("d1 d2", 2)}, P("d1", 2), grev);
  CHECK(sat == std::vector<Polynomial>{P("d2", 2)});
  auto toric = toric_ideal(homogenize(gkz::testing::row_123()));
  auto again = saturate(toric, P("d1 d2 d3 d4", 4), MatrixTermOrder::grevlex(4));
  CHECK(again == toric);
}

TEST_CASE("toric ideal of the homogenized (1 2 3)") {
  auto at = homogenize(gkz::testing::row_123());
  auto grev = MatrixTermOrder::grevlex(4);
  auto gb = toric_ideal(at);
  CHECK(in_ideal(P("d1^2 - d2 d4", 4), gb, grev));
  CHECK(in_ideal(P("d2^2 - d1 d3", 4), gb, grev));
  CHECK(in_ideal(P("d1 d2 - d3 d4", 4), gb, grev));
  CHECK_FALSE(in_ideal(P("d1 - d2", 4), gb, grev));

  // the one-step saturation by the product of all variables gives the same basis
  auto one_step = saturate(lattice_basis_ideal(integer_kernel(at.matrix())), P("d1 d2 d3 d4", 4), grev);
  CHECK(one_step == gb);
}

TEST_CASE("toric membership oracle on the corpus") {
  auto cases = gkz::testing::corpus();
  cases.push_back(gkz::testing::row_123());
  for (const auto& a : cases) {
    for (const auto& m : {a, homogenize(a)}) {
      auto order = MatrixTermOrder::grevlex(m.n());
      auto gb = toric_ideal(m);
      for (const auto& g : gb) {
        // every basis element is a binomial with exponent difference in the kernel
        REQUIRE(g.size() == 2);
        auto it = g.terms().begin();
        Exponent u = it->first;
        Exponent v = std::next(it)->first;
        IntegerVector diff(m.n());
        for (std::size_t j = 0; j < m.n(); ++j) diff[j] = u[j] - v[j];
        IntegerVector img = multiply(m.matrix(), diff);
        CHECK(std::all_of(img.begin(), img.end(), [](const Integer& x) { return x == 0; }));
      }
      for (const auto& l : enumerate_kernel_box(m, m.n() > 4 ? 2 : 3)) {
        std::vector<long> ll(l.begin(), l.end());
        if (std::all_of(ll.begin(), ll.end(), [](long x) { return x == 0; })) continue;
        CHECK(in_ideal(Polynomial::binomial(ll), gb, order));
      }
    }
  }
}

TEST_CASE("reduced basis does not depend on generator order") {
  auto at = homogenize(IntegerPointConfig::from_rows({{1, 0, 2, 1}, {0, 1, 1, 3}}));
  auto order = MatrixTermOrder(at.n(), {{1, 1, 1, 1, 0}});
  auto gb = toric_ideal(at, order);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto shuffled = gb;
    // add redundant combinations before shuffling
    shuffled.push_back(gb[0] * Rational(3) + gb.back());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(buchberger(shuffled, order) == gb);
  }
}

TEST_CASE("initial ideal of the homogenized (1 2 3)") {
  auto at = homogenize(gkz::testing::row_123());
  auto gb = toric_ideal(at);
  RationalVector w{1 + Rational(1, 100), 1, 1, 0};
  InitialIdeal in = initial_ideal(gb, w);
  REQUIRE(in.is_monomial);
  MonomialIdeal expected(4, {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {0, 3, 0, 0}});
  CHECK(*in.monomial == expected);
  for (const auto& g : in.monomial->generators()) CHECK(g[3] == 0);
}

TEST_CASE("initial ideal of the zero ideal") {
  InitialIdeal in = initial_ideal({}, RationalVector{1, 2});
  CHECK(in.is_monomial);
  CHECK(in.monomial->is_zero());
}

TEST_CASE("non-generic weight gives a flagged non-monomial initial ideal") {
  auto gb = toric_ideal(homogenize(gkz::testing::row_123()));
  InitialIdeal in = initial_ideal(gb, RationalVector{1, 1, 1, 1});
  CHECK_FALSE(in.is_monomial);
}

TEST_CASE("weight shift invariance on a homogeneous ideal") {
  auto at = homogenize(gkz::testing::row_123());
  auto gb = toric_ideal(at);
  RationalVector u{Rational(101, 100), 1, 1, 0};
  auto base = initial_ideal(gb, u);
  for (Rational t : {Rational(3, 7), Rational(-1, 2), Rational(5), Rational(-2, 9)}) {
    RationalVector s = u;
    for (auto& v : s) v += t;
    auto shifted = initial_ideal(gb, s);
    CHECK(shifted.generators == base.generators);
  }
}
