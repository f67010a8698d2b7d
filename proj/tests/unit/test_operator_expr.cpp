#include <random>

#include "doctest.h"
#include "gkz/errors.hpp"
#include "gkz/operator_expr.hpp"

using namespace gkz;

namespace {

const OperatorSpace kSpace{1, 3};

Operator op(const char* text) { return parse_operator(text, kSpace); }

Operator::Key key(Exponent d, std::vector<int> s) { return Operator::Key{std::move(d), std::move(s)}; }

RationalFunction poly(const char* text) {
  // coefficient-only operators give their single coefficient
  Operator o = op(text);
  REQUIRE(o.is_coefficient());
  return o.is_zero() ? RationalFunction(Polynomial(kSpace.nvars())) : o.terms().begin()->second;
}

}  // namespace

TEST_CASE("Euler operator for (1 2 3)") {
  Operator e = op("x1*d1 + 2*x2*d2 + 3*x3*d3 - s1");
  CHECK(e.terms().size() == 4);
  CHECK(e.terms().at(key({1, 0, 0}, {0})) == poly("x1"));
  CHECK(e.terms().at(key({0, 1, 0}, {0})) == poly("2 x2"));
  CHECK(e.terms().at(key({0, 0, 1}, {0})) == poly("3 x3"));
  CHECK(e.terms().at(key({0, 0, 0}, {0})) == poly("-s1"));
}

TEST_CASE("shift pairing and identity") {
  Operator p = op("d2 - S1^-2");
  CHECK(p.terms().size() == 2);
  CHECK(p.terms().at(key({0, 1, 0}, {0})) == poly("1"));
  CHECK(p.terms().at(key({0, 0, 0}, {-2})) == poly("-1"));
  CHECK(op("(1)") == Operator::identity(kSpace));
  CHECK(op("S1 * S1^-1") == Operator::identity(kSpace));
}

TEST_CASE("ring relations") {
  CHECK(op("S1 * s1") == op("(s1 + 1) * S1"));
  CHECK(op("S1^-1 * s1") == op("(s1 - 1) * S1^-1"));
  CHECK(op("d1 * x1") == op("x1 * d1 + 1"));
  CHECK(op("d2 * x1") == op("x1 * d2"));
  CHECK(op("d1 * S1") == op("S1 * d1"));
  CHECK(op("d1^2 * x1^2") == op("x1^2 d1^2 + 4 x1 d1 + 2"));
  CHECK(op("d1 * (1/x1)") == op("(1/x1) * d1 - 1/x1^2"));
  CHECK(op("S1 * (x1/s1)") == op("x1/(s1 + 1) * S1"));
  // theta_1 = x1 d1 and x1 commute up to x1
  CHECK(op("x1*d1*x1 - x1*x1*d1") == op("x1"));
}

TEST_CASE("associativity on random operators") {
  std::mt19937 rng(7);
  const char* atoms[] = {"x1", "x2", "d1", "d2", "S1", "S1^-1", "s1", "2", "1/x1", "(x2 + s1)/(s1 - 3)"};
  auto random_op = [&]() {
    std::string t = atoms[rng() % 10];
    t += " + ";
    t += atoms[rng() % 10];
    t += " * ";
    t += atoms[rng() % 10];
    return op(t.c_str());
  };
  for (int i = 0; i < 30; ++i) {
    Operator a = random_op(), b = random_op(), c = random_op();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("printing round-trips") {
  for (const char* t : {"x1*d1 + 2*x2*d2 + 3*x3*d3 - s1", "d2 - S1^-2", "(1)", "-s1*x1/(6*x2)",
                        "(3*x1*x3 - 4*x2^2)/(6*x2*x3)", "(2*(s1 - 1)*x2 + x1^2)/(6*x2) * S1^-1",
                        "x3*d3*S1^-1 - (1/2)^2*d1", "-(x1 + -x2)^2 * d3", "0.25 x1 - 3/4"}) {
    CAPTURE(t);
    auto e = OperatorExpression::parse(t, kSpace);
    const std::string printed = e.to_string();
    CHECK(OperatorExpression::parse(printed, kSpace).to_string() == printed);
    CHECK(normal_form(OperatorExpression::parse(printed, kSpace)) == normal_form(e));
    Operator n = normal_form(e);
    CHECK(parse_operator(n.to_string(), kSpace) == n);
  }
  CHECK(op("0.25 x1 - 3/4").to_string() == "(1/4 x1 - 3/4)");
  CHECK(op("x1*d1").to_string() == "x1 * d1");
}

TEST_CASE("parse errors carry positions") {
  auto fails_at = [](const char* t, std::size_t where) {
    CAPTURE(t);
    try {
      OperatorExpression::parse(t, kSpace);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.position() == where);
      CHECK(e.exit_code() == ExitCode::kParse);
    }
  };
  fails_at("x1 +", 4);
  fails_at("x4 * d1", 0);
  fails_at("d1 + S2", 5);
  fails_at("x1 * d1^-1", 7);
  fails_at("x1 / d1", 3);
  fails_at("(x1 + d1", 8);
  fails_at("x1 ) ", 3);
  fails_at("x1 @ 2", 3);
  fails_at("", 0);
  fails_at("q1", 0);
  fails_at("1/0", 2);
}

TEST_CASE("rational functions") {
  const std::size_t nv = kSpace.nvars();
  RationalFunction a(Polynomial::variable(nv, 1), Polynomial::variable(nv, 2));  // x1/x2
  CHECK(a * a.inverse() == RationalFunction::constant(nv, 1));
  CHECK((a - a).is_zero());
  CHECK(a.derivative(2) == poly("-x1/x2^2"));
  CHECK(a.denominator_free_of(1) == false);
  CHECK(poly("s1^2/(s1 + 2)").denominator_free_of(1));
  const std::vector<double> at{0.5, 2.0, 4.0, 1.0};
  CHECK(a.evaluate(at) == doctest::Approx(0.5));
  CHECK_THROWS_AS(poly("1/(x1 - 2)").evaluate(at), NumericError);
  std::vector<int> shift{1, 0, 0, 0};
  CHECK(poly("s1 x1").translated(shift) == poly("(s1 + 1) x1"));
  const std::vector<Rational> s{Rational(1, 2)};
  Polynomial spec = poly("(s1 x1 + x2)/(s1 + 1)").specialize_prefix(s);
  CHECK(spec.coefficient({1, 0, 0}) == Rational(1, 3));
  CHECK(spec.coefficient({0, 1, 0}) == Rational(2, 3));
  CHECK_THROWS_AS(poly("1/x1").specialize_prefix(s), ValidationError);
  const std::vector<Rational> pole{Rational(-1)};
  CHECK_THROWS_AS(poly("x1/(s1 + 1)").specialize_prefix(pole), NumericError);
}
