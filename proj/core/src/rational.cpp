#include "gkz/rational.hpp"

#include <cctype>

#include "gkz/errors.hpp"

namespace gkz {

namespace {

bool is_integer_literal(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  return true;
}

}  // namespace

std::optional<Rational> try_parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+') return std::nullopt;
  if (num[0] == '+') num.remove_prefix(1);
  Integer p(std::string(num), 10);
  Integer q(std::string(den), 10);
  if (q == 0) return std::nullopt;
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  if (auto r = try_parse_rational(text)) return *r;
  throw ParseError("rational", "malformed rational '" + std::string(text) + "'", 0);
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

Integer floor(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Rational frac(const Rational& value) { return value - Rational(floor(value)); }

Integer lcm_of_denominators(const RationalVector& values) {
  Integer l = 1;
  for (const auto& v : values) l = lcm(l, v.get_den());
  return l;
}

RationalVector to_rational(const IntegerVector& values) {
  return RationalVector(values.begin(), values.end());
}

}  // namespace gkz
