#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gkz {

using Integer = mpz_class;
using Rational = mpq_class;

using IntegerVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

// Accepts "p", "-p", "p/q"; the result is canonicalized.
Rational parse_rational(std::string_view text);
std::optional<Rational> try_parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

inline bool is_integer(const Rational& value) { return value.get_den() == 1; }

// True when value is 0, -1, -2, ...
inline bool is_nonpositive_integer(const Rational& value) {
  return is_integer(value) && sgn(value) <= 0;
}

Integer floor(const Rational& value);
Rational frac(const Rational& value);  // value - floor(value), in [0, 1)

inline double to_double(const Rational& value) { return value.get_d(); }

Integer lcm_of_denominators(const RationalVector& values);

RationalVector to_rational(const IntegerVector& values);

}  // namespace gkz
