#pragma once

#include "gkz/rational.hpp"

namespace gkz {

// log|Gamma(x)| together with the sign of Gamma(x), for x not a pole.
struct LogGamma {
  double log_abs = 0.0;
  int sign = 1;
};

// Throws NumericError at poles (x = 0, -1, -2, ...).
LogGamma log_gamma(double x);

// 1 / Gamma(x); exactly 0 at poles.
double reciprocal_gamma(double x);

// Gamma(x + 1) has a pole, i.e. x is a negative integer.
inline bool gamma_term_vanishes(const Rational& exponent) {
  return is_integer(exponent) && sgn(exponent) < 0;
}

// Distance from x to the nearest nonpositive integer (infinity for x > 0.5).
double distance_to_pole(double x);

}  // namespace gkz
