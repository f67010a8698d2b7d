#include "gkz/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

#include "gkz/errors.hpp"

namespace gkz {

Exponent lcm(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

bool divides(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

int total_degree(const Exponent& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Polynomial Polynomial::monomial(const Exponent& e, const Rational& c) {
  Polynomial p(e.size());
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t j) {
  Exponent e(nvars, 0);
  e[j] = 1;
  return monomial(e);
}

Polynomial Polynomial::binomial(const std::vector<long>& l) {
  Exponent plus(l.size(), 0), minus(l.size(), 0);
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] > 0) plus[i] = static_cast<int>(l[i]);
    if (l[i] < 0) minus[i] = static_cast<int>(-l[i]);
  }
  Polynomial p(l.size());
  p.add_term(plus, Rational(1));
  p.add_term(minus, Rational(-1));
  return p;
}

Rational Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) deg = std::max(deg, total_degree(e));
  return deg;
}

bool Polynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int deg = total_degree(terms_.begin()->first);
  return std::all_of(terms_.begin(), terms_.end(), [deg](const auto& t) { return total_degree(t.first) == deg; });
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial p(std::max(a.nvars_, b.nvars_));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      p.add_term(e, ca * cb);
    }
  return p;
}

Polynomial Polynomial::times_monomial(const Exponent& m, const Rational& c) const {
  Polynomial p(nvars_);
  if (c == 0) return p;
  for (const auto& [e, v] : terms_) {
    Exponent f = e;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += m[i];
    p.terms_.emplace_hint(p.terms_.end(), std::move(f), v * c);
  }
  return p;
}

Polynomial Polynomial::extended(std::size_t extra) const {
  Polynomial p(nvars_ + extra);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f.resize(nvars_ + extra, 0);
    p.terms_.emplace(std::move(f), c);
  }
  return p;
}

Polynomial Polynomial::truncated(std::size_t k) const {
  Polynomial p(k);
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = k; i < e.size(); ++i)
      if (e[i] != 0) throw ValidationError("polynomial", "dropped variable occurs in " + to_string());
    p.add_term(Exponent(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(k)), c);
  }
  return p;
}

std::string monomial_to_string(const Exponent& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += ' ';
    s += 'd' + std::to_string(i + 1);
    if (e[i] != 1) s += '^' + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  // highest total degree first, then reverse lexicographic map order
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    const int da = total_degree(a->first), db = total_degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });
  for (auto* t : order) {
    const Rational& c = t->second;
    const bool is_one = total_degree(t->first) == 0;
    Rational mag = abs(c);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (is_one) {
      s += gkz::to_string(mag);
    } else {
      if (mag != 1) s += gkz::to_string(mag) + " ";
      s += monomial_to_string(t->first);
    }
  }
  return s;
}

namespace {

struct PolyParser {
  std::string_view text;
  std::size_t nvars;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("polynomial", what, pos); }

  std::string digits() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string(text.substr(start, pos - start));
  }

  Polynomial parse() {
    Polynomial p(nvars);
    skip();
    if (pos == text.size()) fail("empty polynomial");
    bool first = true;
    while (pos < text.size()) {
      int sign = 1;
      if (text[pos] == '+' || text[pos] == '-') {
        sign = text[pos] == '-' ? -1 : 1;
        ++pos;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      Rational coeff(sign);
      Exponent e(nvars, 0);
      bool any = false;
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        std::string num = digits();
        if (pos < text.size() && text[pos] == '/') {
          ++pos;
          std::string den = digits();
          if (den.empty()) fail("missing denominator");
          if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
          coeff *= Rational(Integer(num, 10), Integer(den, 10));
        } else {
          coeff *= Rational(Integer(num, 10));
        }
        coeff.canonicalize();
        any = true;
        skip();
        if (pos < text.size() && text[pos] == '*') {
          ++pos;
          skip();
        }
      }
      while (pos < text.size() && text[pos] == 'd') {
        ++pos;
        std::string idx = digits();
        if (idx.empty()) fail("expected variable index after 'd'");
        std::size_t j = std::stoul(idx);
        if (j < 1 || j > nvars) fail("unknown variable d" + idx);
        int power = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          std::string pw = digits();
          if (pw.empty()) fail("expected exponent");
          power = std::stoi(pw);
        }
        e[j - 1] += power;
        any = true;
        skip();
        if (pos < text.size() && text[pos] == '*') {
          ++pos;
          skip();
        }
      }
      if (!any) fail("expected a term");
      p.add_term(e, coeff);
      skip();
    }
    return p;
  }
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, std::size_t nvars) { return PolyParser{text, nvars}.parse(); }

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) arr.push_back({{"coeff", to_string(c)}, {"exp", e}});
  return arr;
}

Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t nvars) {
  Polynomial p(nvars);
  for (const auto& t : j) {
    Exponent e = t.at("exp").get<Exponent>();
    if (e.size() != nvars) throw ParseError("polynomial", "exponent length mismatch", 0);
    p.add_term(e, parse_rational(t.at("coeff").get<std::string>()));
  }
  return p;
}

}  // namespace gkz
