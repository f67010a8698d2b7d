#include "gkz/operator_expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "gkz/errors.hpp"

namespace gkz {

namespace {

Exponent zero_exponent(std::size_t n) { return Exponent(n, 0); }

// Largest monomial dividing every term of both polynomials.
Exponent common_monomial(const Polynomial& a, const Polynomial& b) {
  Exponent g;
  bool first = true;
  for (const Polynomial* p : {&a, &b})
    for (const auto& [e, c] : p->terms()) {
      if (first) {
        g = e;
        first = false;
      } else {
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::min(g[i], e[i]);
      }
    }
  return g;
}

Rational power(const Rational& v, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= v;
  return r;
}

Polynomial derivative_of(const Polynomial& p, std::size_t var) {
  Polynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    out.add_term(f, c * e[var]);
  }
  return out;
}

bool free_of(const Polynomial& p, std::size_t var) {
  return std::all_of(p.terms().begin(), p.terms().end(), [var](const auto& t) { return t.first[var] == 0; });
}

}  // namespace

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(num_.nvars(), 1)) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw ValidationError("operator", "zero denominator");
  normalize();
}

RationalFunction RationalFunction::constant(std::size_t nvars, const Rational& c) {
  return RationalFunction(Polynomial::constant(nvars, c));
}

void RationalFunction::normalize() {
  const std::size_t nv = std::max(num_.nvars(), den_.nvars());
  if (num_.is_zero()) {
    num_ = Polynomial(nv);
    den_ = Polynomial::constant(nv, 1);
    return;
  }
  Exponent g = common_monomial(num_, den_);
  if (std::any_of(g.begin(), g.end(), [](int v) { return v != 0; })) {
    for (auto& v : g) v = -v;
    num_ = num_.times_monomial(g, 1);
    den_ = den_.times_monomial(g, 1);
  }
  const Rational lead = den_.terms().rbegin()->second;
  if (lead != 1) {
    const Rational inv = 1 / lead;
    num_ *= inv;
    den_ *= inv;
  }
  // num = r den
  if (num_.size() == den_.size() && den_.size() > 1) {
    const Rational r = num_.terms().rbegin()->second;
    if (num_ == den_ * r) {
      num_ = Polynomial::constant(nv, r);
      den_ = Polynomial::constant(nv, 1);
    }
  }
}

bool RationalFunction::is_constant() const {
  return den_.degree() == 0 && num_.degree() <= 0;
}

bool RationalFunction::denominator_free_of(std::size_t first) const {
  for (const auto& [e, c] : den_.terms())
    for (std::size_t i = first; i < e.size(); ++i)
      if (e[i] != 0) return false;
  return true;
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction(Polynomial(std::max(a.nvars(), b.nvars())));
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw ValidationError("operator", "division by a zero coefficient");
  return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  if (free_of(den_, var)) return RationalFunction(derivative_of(num_, var), den_);
  return RationalFunction(derivative_of(num_, var) * den_ - num_ * derivative_of(den_, var), den_ * den_);
}

RationalFunction RationalFunction::translated(std::span<const int> shift) const {
  if (std::all_of(shift.begin(), shift.end(), [](int v) { return v == 0; })) return *this;
  const std::size_t nv = nvars();
  auto apply = [&](const Polynomial& p) {
    Polynomial out(nv);
    for (const auto& [e, c] : p.terms()) {
      Exponent rest = e;
      Polynomial term = Polynomial::constant(nv, c);
      for (std::size_t v = 0; v < shift.size(); ++v) {
        if (shift[v] == 0 || e[v] == 0) continue;
        rest[v] = 0;
        Polynomial lin = Polynomial::variable(nv, v) + Polynomial::constant(nv, Rational(shift[v]));
        for (int k = 0; k < e[v]; ++k) term = term * lin;
      }
      out += term.times_monomial(rest, 1);
    }
    return out;
  };
  return RationalFunction(apply(num_), apply(den_));
}

double RationalFunction::evaluate(std::span<const double> values) const {
  auto eval = [&](const Polynomial& p) {
    double sum = 0.0;
    for (const auto& [e, c] : p.terms()) {
      double t = to_double(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) t *= std::pow(values[i], e[i]);
      sum += t;
    }
    return sum;
  };
  const double den = eval(den_);
  if (den == 0.0) throw NumericError("operator", "coefficient denominator vanishes");
  return eval(num_) / den;
}

Polynomial RationalFunction::specialize_prefix(std::span<const Rational> values) const {
  const std::size_t k = values.size();
  const std::size_t rest = nvars() - k;
  auto spec = [&](const Polynomial& p) {
    Polynomial out(rest);
    for (const auto& [e, c] : p.terms()) {
      Rational v = c;
      for (std::size_t i = 0; i < k; ++i) v *= power(values[i], e[i]);
      out.add_term(Exponent(e.begin() + static_cast<std::ptrdiff_t>(k), e.end()), v);
    }
    return out;
  };
  Polynomial den = spec(den_);
  if (den.degree() > 0) throw ValidationError("operator", "denominator depends on x");
  if (den.is_zero()) throw NumericError("operator", "coefficient denominator vanishes at the given s");
  return spec(num_) * (1 / den.terms().begin()->second);
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Polynomial& p, const OperatorSpace& space) {
  if (p.is_zero()) return "0";
  auto name = [&](std::size_t v) {
    return v < space.d ? "s" + std::to_string(v + 1) : "x" + std::to_string(v - space.d + 1);
  };
  std::vector<const Polynomial::TermMap::value_type*> order;
  for (const auto& t : p.terms()) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    const int da = total_degree(a->first), db = total_degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });
  std::string s;
  for (auto* t : order) {
    const Rational& c = t->second;
    Rational mag = abs(c);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    std::string mono;
    for (std::size_t v = 0; v < t->first.size(); ++v) {
      const int k = t->first[v];
      if (k == 0) continue;
      if (!mono.empty()) mono += ' ';
      mono += name(v);
      if (k != 1) mono += '^' + std::to_string(k);
    }
    if (mono.empty()) {
      s += to_string(mag);
    } else {
      if (mag != 1) s += to_string(mag) + " ";
      s += mono;
    }
  }
  return s;
}

std::string to_string(const RationalFunction& f, const OperatorSpace& space) {
  const std::string num = to_string(f.numerator(), space);
  if (f.denominator().degree() == 0) return f.numerator().size() > 1 ? "(" + num + ")" : num;
  return "(" + num + ")/(" + to_string(f.denominator(), space) + ")";
}

// ---------------------------------------------------------------------------
// Operators in normal form

Operator Operator::identity(OperatorSpace space) {
  return coefficient(space, RationalFunction::constant(space.nvars(), 1));
}

Operator Operator::coefficient(OperatorSpace space, RationalFunction c) {
  Operator op(space);
  op.add(Key{zero_exponent(space.n), std::vector<int>(space.d, 0)}, c);
  return op;
}

Operator Operator::x(OperatorSpace space, std::size_t j) {
  return coefficient(space, RationalFunction(Polynomial::variable(space.nvars(), space.x_var(j))));
}

Operator Operator::s(OperatorSpace space, std::size_t i) {
  return coefficient(space, RationalFunction(Polynomial::variable(space.nvars(), space.s_var(i))));
}

Operator Operator::d(OperatorSpace space, std::size_t j) {
  Operator op(space);
  Key k{zero_exponent(space.n), std::vector<int>(space.d, 0)};
  k.derivative[j] = 1;
  op.add(k, RationalFunction::constant(space.nvars(), 1));
  return op;
}

Operator Operator::shift(OperatorSpace space, std::size_t i, int power) {
  Operator op(space);
  Key k{zero_exponent(space.n), std::vector<int>(space.d, 0)};
  k.shift[i] = power;
  op.add(k, RationalFunction::constant(space.nvars(), 1));
  return op;
}

bool Operator::is_coefficient() const {
  if (terms_.size() > 1) return false;
  if (terms_.empty()) return true;
  const Key& k = terms_.begin()->first;
  return std::all_of(k.derivative.begin(), k.derivative.end(), [](int v) { return v == 0; }) &&
         std::all_of(k.shift.begin(), k.shift.end(), [](int v) { return v == 0; });
}

void Operator::add(const Key& k, const RationalFunction& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Operator operator+(const Operator& a, const Operator& b) {
  Operator out = a;
  if (out.space_.nvars() == 0) out.space_ = b.space_;
  for (const auto& [k, c] : b.terms_) out.add(k, c);
  return out;
}

Operator operator-(const Operator& a, const Operator& b) { return a + b.scaled(-1); }

Operator Operator::scaled(const Rational& c) const {
  Operator out(space_);
  if (c == 0) return out;
  const RationalFunction f = RationalFunction::constant(space_.nvars(), c);
  for (const auto& [k, v] : terms_) out.terms_.emplace(k, v * f);
  return out;
}

Operator operator*(const Operator& a, const Operator& b) {
  const OperatorSpace sp = a.space_;
  Operator out(sp);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      // S^sigma c(s) = c(s + sigma) S^sigma
      RationalFunction moved = cb;
      if (std::any_of(ka.shift.begin(), ka.shift.end(), [](int v) { return v != 0; })) {
        std::vector<int> full(sp.nvars(), 0);
        std::copy(ka.shift.begin(), ka.shift.end(), full.begin());
        moved = cb.translated(full);
      }
      // Leibniz: d^delta c = sum_mu binom(delta, mu) (d^mu c) d^(delta - mu)
      Exponent mu(sp.n, 0);
      for (;;) {
        RationalFunction dc = moved;
        Rational binom = 1;
        for (std::size_t j = 0; j < sp.n && !dc.is_zero(); ++j)
          for (int t = 0; t < mu[j]; ++t) {
            dc = dc.derivative(sp.x_var(j));
            binom = binom * (ka.derivative[j] - t) / (t + 1);
          }
        if (!dc.is_zero()) {
          Operator::Key k{kb.derivative, kb.shift};
          for (std::size_t j = 0; j < sp.n; ++j) k.derivative[j] += ka.derivative[j] - mu[j];
          for (std::size_t i = 0; i < sp.d; ++i) k.shift[i] += ka.shift[i];
          out.add(k, ca * dc * RationalFunction::constant(sp.nvars(), binom));
        }
        std::size_t j = 0;
        while (j < sp.n && mu[j] == ka.derivative[j]) mu[j++] = 0;
        if (j == sp.n) break;
        ++mu[j];
      }
    }
  }
  return out;
}

std::string Operator::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : terms_) {
    std::vector<std::string> parts;
    const bool plain = c.denominator().degree() == 0 && c.numerator().degree() == 0;
    const Rational cc = plain ? c.numerator().terms().begin()->second : Rational(0);
    bool negate = false;
    if (plain) {
      negate = cc < 0;
      if (abs(cc) != 1) parts.push_back(gkz::to_string(abs(cc)));
    } else {
      parts.push_back(gkz::to_string(c, space_));
    }
    for (std::size_t j = 0; j < k.derivative.size(); ++j)
      if (k.derivative[j] != 0)
        parts.push_back("d" + std::to_string(j + 1) +
                        (k.derivative[j] != 1 ? "^" + std::to_string(k.derivative[j]) : ""));
    for (std::size_t i = 0; i < k.shift.size(); ++i)
      if (k.shift[i] != 0)
        parts.push_back("S" + std::to_string(i + 1) + (k.shift[i] != 1 ? "^" + std::to_string(k.shift[i]) : ""));
    std::string term;
    for (const auto& p : parts) term += (term.empty() ? "" : " * ") + p;
    if (term.empty()) term = "1";
    if (s.empty())
      s = (negate ? "-" : "") + term;
    else
      s += (negate ? " - " : " + ") + term;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

using NodePtr = std::shared_ptr<const OperatorNode>;
using Kind = OperatorNode::Kind;

NodePtr make(OperatorNode n) { return std::make_shared<const OperatorNode>(std::move(n)); }

// A subtree without derivatives or shifts.
bool pure_coefficient(const OperatorNode& n) {
  if (n.kind == Kind::D || n.kind == Kind::Shift) return false;
  return std::all_of(n.children.begin(), n.children.end(), [](const NodePtr& c) { return pure_coefficient(*c); });
}

struct Parser {
  std::string_view text;
  OperatorSpace space;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t at) const { throw ParseError("operator", what, at); }
  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool peek(char c) {
    skip();
    return pos < text.size() && text[pos] == c;
  }
  bool digit_at(std::size_t p) const { return p < text.size() && std::isdigit(static_cast<unsigned char>(text[p])); }
  std::string digits() {
    const std::size_t start = pos;
    while (digit_at(pos)) ++pos;
    return std::string(text.substr(start, pos - start));
  }

  NodePtr parse_all() {
    skip();
    if (pos == text.size()) fail("empty operator", pos);
    NodePtr n = sum();
    skip();
    if (pos != text.size()) fail(std::string("unexpected '") + text[pos] + "'", pos);
    return n;
  }

  NodePtr sum() {
    OperatorNode node;
    node.kind = Kind::Sum;
    node.children.push_back(product());
    node.signs.push_back('+');
    while (peek('+') || peek('-')) {
      node.signs.push_back(text[pos++]);
      node.children.push_back(product());
    }
    if (node.children.size() == 1) return node.children.front();
    return make(std::move(node));
  }

  bool starts_atom() {
    skip();
    if (pos >= text.size()) return false;
    const char c = text[pos];
    return c == '(' || c == 'x' || c == 'd' || c == 'S' || c == 's' || std::isdigit(static_cast<unsigned char>(c));
  }

  NodePtr product() {
    std::vector<NodePtr> factors{unary()};
    auto flush = [&]() {
      if (factors.size() == 1) return factors.front();
      OperatorNode p;
      p.kind = Kind::Product;
      p.children = factors;
      return make(std::move(p));
    };
    for (;;) {
      if (peek('*')) {
        ++pos;
        factors.push_back(unary());
      } else if (peek('/')) {
        const std::size_t at = pos++;
        NodePtr den = unary();
        if (!pure_coefficient(*den)) fail("division by an operator", at);
        OperatorNode q;
        q.kind = Kind::Quotient;
        q.children = {flush(), den};
        factors = {make(std::move(q))};
      } else if (starts_atom()) {
        factors.push_back(unary());
      } else {
        break;
      }
    }
    return flush();
  }

  NodePtr unary() {
    if (peek('-')) {
      ++pos;
      OperatorNode n;
      n.kind = Kind::Negate;
      n.children = {unary()};
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!peek('^')) return base;
    const std::size_t at = pos++;
    skip();
    bool negative = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) negative = text[pos++] == '-';
    std::string ds = digits();
    if (ds.empty()) fail("expected an integer exponent", pos);
    if (ds.size() > 6) fail("exponent too large", at);
    const int p = (negative ? -1 : 1) * std::stoi(ds);
    if (p < 0 && base->kind != Kind::Shift && !pure_coefficient(*base))
      fail("negative power of an operator that is not a shift or coefficient", at);
    OperatorNode n;
    n.kind = Kind::Power;
    n.power = p;
    n.children = {base};
    return make(std::move(n));
  }

  NodePtr atom() {
    skip();
    if (pos >= text.size()) fail("unexpected end of input", pos);
    const std::size_t at = pos;
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = sum();
      if (!peek(')')) fail("expected ')'", pos);
      ++pos;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string whole = digits();
      Rational v{Integer(whole, 10)};
      if (pos < text.size() && text[pos] == '.' && digit_at(pos + 1)) {
        ++pos;
        std::string frac = digits();
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        v = Rational(Integer(whole + frac, 10), scale);
        v.canonicalize();
      } else if (pos < text.size() && text[pos] == '/' && digit_at(pos + 1)) {
        ++pos;
        const std::size_t den_at = pos;
        std::string den = digits();
        if (Integer(den, 10) == 0) fail("zero denominator", den_at);
        v = Rational(Integer(whole, 10), Integer(den, 10));
        v.canonicalize();
      }
      OperatorNode n;
      n.kind = Kind::Number;
      n.value = v;
      return make(std::move(n));
    }
    if (c == 'x' || c == 'd' || c == 'S' || c == 's') {
      ++pos;
      std::string idx = digits();
      if (idx.empty() || idx.size() > 6) fail(std::string("unknown identifier '") + c + "'", at);
      const std::size_t k = std::stoul(idx);
      const bool on_x = c == 'x' || c == 'd';
      const std::size_t bound = on_x ? space.n : space.d;
      if (k < 1 || k > bound) fail("unknown identifier " + std::string(1, c) + idx, at);
      OperatorNode n;
      n.kind = c == 'x' ? Kind::X : c == 'd' ? Kind::D : c == 'S' ? Kind::Shift : Kind::S;
      n.index = k - 1;
      return make(std::move(n));
    }
    fail(std::string("unexpected '") + c + "'", at);
  }
};

int precedence(const OperatorNode& n) {
  switch (n.kind) {
    case Kind::Sum: return 0;
    case Kind::Product:
    case Kind::Quotient: return 1;
    case Kind::Negate: return 2;
    case Kind::Power: return 3;
    default: return 4;
  }
}

std::string print(const OperatorNode& n) {
  auto wrap = [](const OperatorNode& c, bool paren) { return paren ? "(" + print(c) + ")" : print(c); };
  switch (n.kind) {
    case Kind::Number: return to_string(n.value);
    case Kind::X: return "x" + std::to_string(n.index + 1);
    case Kind::D: return "d" + std::to_string(n.index + 1);
    case Kind::Shift: return "S" + std::to_string(n.index + 1);
    case Kind::S: return "s" + std::to_string(n.index + 1);
    case Kind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) s += n.signs[i] == '-' ? " - " : " + ";
        s += wrap(*n.children[i], n.children[i]->kind == Kind::Sum);
      }
      return s;
    }
    case Kind::Product: {
      std::string s;
      for (const auto& c : n.children) {
        if (!s.empty()) s += " * ";
        s += wrap(*c, precedence(*c) <= 1 || (c->kind == Kind::Negate && !s.empty()));
      }
      return s;
    }
    case Kind::Quotient:
      return wrap(*n.children[0], precedence(*n.children[0]) == 0) + " / " +
             wrap(*n.children[1], precedence(*n.children[1]) <= 2);
    case Kind::Power: {
      const auto& b = *n.children[0];
      // a rational literal such as 1/2 needs parentheses under a power
      const bool fraction = b.kind == Kind::Number && !is_integer(b.value);
      return wrap(b, precedence(b) < 4 || fraction) + "^" + std::to_string(n.power);
    }
    case Kind::Negate: return "-" + wrap(*n.children[0], precedence(*n.children[0]) <= 1);
  }
  return "";
}

Operator lower(const OperatorNode& n, const OperatorSpace& sp) {
  switch (n.kind) {
    case Kind::Number: return Operator::coefficient(sp, RationalFunction::constant(sp.nvars(), n.value));
    case Kind::X: return Operator::x(sp, n.index);
    case Kind::D: return Operator::d(sp, n.index);
    case Kind::Shift: return Operator::shift(sp, n.index, 1);
    case Kind::S: return Operator::s(sp, n.index);
    case Kind::Sum: {
      Operator out(sp);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        Operator c = lower(*n.children[i], sp);
        out = n.signs[i] == '-' ? out - c : out + c;
      }
      return out;
    }
    case Kind::Product: {
      Operator out = lower(*n.children[0], sp);
      for (std::size_t i = 1; i < n.children.size(); ++i) out = out * lower(*n.children[i], sp);
      return out;
    }
    case Kind::Quotient: {
      Operator den = lower(*n.children[1], sp);
      if (den.is_zero()) throw ValidationError("operator", "division by zero");
      return lower(*n.children[0], sp) * Operator::coefficient(sp, den.terms().begin()->second.inverse());
    }
    case Kind::Power: {
      const auto& b = *n.children[0];
      if (b.kind == Kind::Shift) return Operator::shift(sp, b.index, n.power);
      Operator base = lower(b, sp);
      if (n.power < 0) {
        if (!base.is_coefficient() || base.is_zero())
          throw ValidationError("operator", "negative power of a non-invertible operator");
        base = Operator::coefficient(sp, base.terms().begin()->second.inverse());
      }
      Operator out = Operator::identity(sp);
      for (int k = 0; k < std::abs(n.power); ++k) out = out * base;
      return out;
    }
    case Kind::Negate: return lower(*n.children[0], sp).scaled(-1);
  }
  return Operator(sp);
}

}  // namespace

OperatorExpression OperatorExpression::parse(std::string_view text, OperatorSpace space) {
  Parser p{text, space};
  return OperatorExpression(p.parse_all(), space);
}

std::string OperatorExpression::to_string() const { return root_ ? print(*root_) : ""; }

Operator normal_form(const OperatorExpression& e) { return lower(e.root(), e.space()); }

}  // namespace gkz
