#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gkz/rational.hpp"

namespace gkz {

using Exponent = std::vector<int>;

Exponent lcm(const Exponent& a, const Exponent& b);
bool divides(const Exponent& a, const Exponent& b);  // a | b
int total_degree(const Exponent& e);

// Polynomial in the commuting variables d1..dn with exact rational
// coefficients. Terms are kept in a map keyed by exponent; zero
// coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial monomial(const Exponent& e, const Rational& c = Rational(1));
  static Polynomial variable(std::size_t nvars, std::size_t j);
  // d^{l+} - d^{l-}
  static Polynomial binomial(const std::vector<long>& l);

  // Text form like "3/2 d1^2 d3 - d2^3"; variables d1..d<nvars>.
  static Polynomial parse(std::string_view text, std::size_t nvars);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  std::size_t size() const noexcept { return terms_.size(); }
  Rational coefficient(const Exponent& e) const;
  int degree() const;
  bool is_homogeneous() const;

  void add_term(const Exponent& e, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial times_monomial(const Exponent& e, const Rational& c) const;

  // Copy with an extra variable appended (its exponent is 0).
  Polynomial extended(std::size_t extra) const;
  // Copy restricted to the first k variables; throws if a dropped variable occurs.
  Polynomial truncated(std::size_t k) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::size_t nvars_ = 0;
  TermMap terms_;
};

nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t nvars);

std::string monomial_to_string(const Exponent& e);

}  // namespace gkz
