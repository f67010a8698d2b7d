#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkz/polynomial.hpp"

namespace gkz {

// Variables of coefficient polynomials: s1..sd first, then x1..xn.
struct OperatorSpace {
  std::size_t d = 0;
  std::size_t n = 0;

  std::size_t nvars() const noexcept { return d + n; }
  std::size_t s_var(std::size_t i) const noexcept { return i; }
  std::size_t x_var(std::size_t j) const noexcept { return d + j; }
  friend bool operator==(const OperatorSpace&, const OperatorSpace&) = default;
};

// num / den over an OperatorSpace; den is never zero. Monomial factors
// common to num and den are cancelled and den is scaled to leading
// coefficient 1, but no polynomial gcd is taken.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(Polynomial num);
  RationalFunction(Polynomial num, Polynomial den);
  static RationalFunction constant(std::size_t nvars, const Rational& c);

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  std::size_t nvars() const noexcept { return num_.nvars(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_constant() const;
  // No variable at index >= first occurs in the denominator.
  bool denominator_free_of(std::size_t first) const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  RationalFunction inverse() const;  // throws ValidationError on zero

  RationalFunction derivative(std::size_t var) const;
  // Substitute v -> v + shift[v] for the first shift.size() variables.
  RationalFunction translated(std::span<const int> shift) const;

  // Full evaluation; NumericError if the denominator vanishes.
  double evaluate(std::span<const double> values) const;
  // Substitute the first `values.size()` variables by exact rationals; the
  // denominator must then be constant. Returns a polynomial in the remaining
  // variables (re-indexed from 0).
  Polynomial specialize_prefix(std::span<const Rational> values) const;

  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

 private:
  void normalize();
  Polynomial num_, den_;
};

// Parse tree of an operator. Products apply right to left.
struct OperatorNode {
  enum class Kind { Number, X, D, Shift, S, Sum, Product, Quotient, Power, Negate };
  Kind kind = Kind::Number;
  Rational value;          // Number
  std::size_t index = 0;   // X, D, Shift, S (0-based)
  int power = 0;           // Power
  std::vector<char> signs;  // Sum: '+' or '-' per child
  std::vector<std::shared_ptr<const OperatorNode>> children;
};

class OperatorExpression {
 public:
  OperatorExpression() = default;
  OperatorExpression(std::shared_ptr<const OperatorNode> root, OperatorSpace space)
      : root_(std::move(root)), space_(space) {}

  // Identifiers x<j>, d<j>, S<i>, s<i>; numbers are integers, p/q or
  // decimals; operators + - * / ^ and parentheses. Negative and non-unit
  // powers are allowed on shifts and pure coefficients only.
  static OperatorExpression parse(std::string_view text, OperatorSpace space);

  const OperatorNode& root() const { return *root_; }
  const OperatorSpace& space() const noexcept { return space_; }
  std::string to_string() const;

 private:
  std::shared_ptr<const OperatorNode> root_;
  OperatorSpace space_;
};

// Normal form sum_k c_k(s, x) d^delta_k S^sigma_k (shift applied first).
class Operator {
 public:
  struct Key {
    Exponent derivative;     // length n
    std::vector<int> shift;  // length d
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  using Terms = std::map<Key, RationalFunction>;

  Operator() = default;
  explicit Operator(OperatorSpace space) : space_(space) {}
  static Operator identity(OperatorSpace space);
  static Operator coefficient(OperatorSpace space, RationalFunction c);
  static Operator x(OperatorSpace space, std::size_t j);
  static Operator d(OperatorSpace space, std::size_t j);
  static Operator shift(OperatorSpace space, std::size_t i, int power);
  static Operator s(OperatorSpace space, std::size_t i);

  const OperatorSpace& space() const noexcept { return space_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  // A pure coefficient: one term with no derivative or shift.
  bool is_coefficient() const;

  void add(const Key& k, const RationalFunction& c);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);  // a after b
  Operator scaled(const Rational& c) const;

  std::string to_string() const;
  friend bool operator==(const Operator&, const Operator&) = default;

 private:
  OperatorSpace space_;
  Terms terms_;
};

Operator normal_form(const OperatorExpression& e);
inline Operator parse_operator(std::string_view text, OperatorSpace space) {
  return normal_form(OperatorExpression::parse(text, space));
}

// Polynomial text with variables named s1.., x1.. (e.g. "-1/6 s1 x1").
std::string to_string(const Polynomial& p, const OperatorSpace& space);
std::string to_string(const RationalFunction& f, const OperatorSpace& space);

}  // namespace gkz
