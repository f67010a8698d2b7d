#include "gkz/log_gamma.hpp"

#include <cmath>
#include <limits>

#include "gkz/errors.hpp"

namespace gkz {

LogGamma log_gamma(double x) {
  if (x <= 0 && x == std::floor(x)) throw NumericError("log_gamma", "pole at " + std::to_string(x));
  LogGamma r;
  r.log_abs = std::lgamma(x);
  if (x < 0) {
    // Gamma alternates in sign between consecutive negative integers and is
    // negative on (-1, 0).
    const double k = std::ceil(-x);
    r.sign = std::fmod(k, 2.0) == 1.0 ? -1 : 1;
  }
  return r;
}

double reciprocal_gamma(double x) {
  if (x <= 0 && x == std::floor(x)) return 0.0;
  LogGamma g = log_gamma(x);
  return g.sign * std::exp(-g.log_abs);
}

double distance_to_pole(double x) {
  if (x > 0.5) return std::numeric_limits<double>::infinity();
  return std::fabs(x - std::round(x));
}

}  // namespace gkz
