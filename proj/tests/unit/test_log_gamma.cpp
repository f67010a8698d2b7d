#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gkz/errors.hpp"
#include "gkz/log_gamma.hpp"

using namespace gkz;

namespace {

// Stirling series after shifting the argument above 20 by recursion.
double stirling_log_abs(double x) {
  double shift = 0.0;
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return std::log(std::numbers::pi / std::fabs(std::sin(std::numbers::pi * x))) - stirling_log_abs(1.0 - x);
  }
  while (x < 20.0) {
    shift -= std::log(x);
    x += 1.0;
  }
  const double x2 = x * x;
  double s = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2 * std::numbers::pi);
  s += 1.0 / (12 * x) - 1.0 / (360 * x * x2) + 1.0 / (1260 * x2 * x2 * x) - 1.0 / (1680 * x2 * x2 * x2 * x);
  return s + shift;
}

}  // namespace

TEST_CASE("log_gamma matches the Stirling oracle") {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.25, 7.0, 12.5, 30.0, 123.456, -0.5, -1.5, -2.25, -7.9, -20.5}) {
    CAPTURE(x);
    const double ref = stirling_log_abs(x);
    CHECK(log_gamma(x).log_abs == doctest::Approx(ref).epsilon(1e-13).scale(std::max(1.0, std::fabs(ref))));
  }
}

TEST_CASE("log_gamma sign") {
  CHECK(log_gamma(2.5).sign == 1);
  CHECK(log_gamma(-0.5).sign == -1);
  CHECK(log_gamma(-1.5).sign == 1);
  CHECK(log_gamma(-2.5).sign == -1);
  for (double x : {-0.3, -1.3, -2.7, -5.5, 0.7}) {
    CAPTURE(x);
    const double g = std::tgamma(x);
    CHECK(log_gamma(x).sign == (g < 0 ? -1 : 1));
  }
}

TEST_CASE("poles") {
  CHECK_THROWS_AS(log_gamma(0.0), NumericError);
  CHECK_THROWS_AS(log_gamma(-3.0), NumericError);
  CHECK(reciprocal_gamma(0.0) == 0.0);
  CHECK(reciprocal_gamma(-4.0) == 0.0);
  CHECK(reciprocal_gamma(5.0) == doctest::Approx(1.0 / 24));
  CHECK(reciprocal_gamma(-0.5) == doctest::Approx(1.0 / std::tgamma(-0.5)));
  CHECK(gamma_term_vanishes(Rational(-1)));
  CHECK(gamma_term_vanishes(Rational(-7)));
  CHECK_FALSE(gamma_term_vanishes(Rational(0)));
  CHECK_FALSE(gamma_term_vanishes(Rational(-1, 2)));
  CHECK(distance_to_pole(-2.001) == doctest::Approx(0.001));
  CHECK(std::isinf(distance_to_pole(3.0)));
}
