#include "gkz/groebner.hpp"

#include <algorithm>
#include <set>

#include "gkz/errors.hpp"

namespace gkz {

namespace {

struct Term {
  Exponent e;
  std::vector<Integer> key;
  Rational c;
};

// Terms sorted by decreasing monomial order.
struct SortedPoly {
  std::vector<Term> terms;
  int sugar = 0;

  bool empty() const { return terms.empty(); }
  const Term& lead() const { return terms.front(); }
};

class Engine {
 public:
  explicit Engine(const MatrixTermOrder& order) : order_(order) {}

  int cmp(const Term& a, const Term& b) const { return order_.compare(a.key, a.e, b.key, b.e); }

  SortedPoly from(const Polynomial& p) const {
    SortedPoly s;
    for (const auto& [e, c] : p.terms()) s.terms.push_back({e, order_.key(e), c});
    std::sort(s.terms.begin(), s.terms.end(), [this](const Term& a, const Term& b) { return cmp(a, b) > 0; });
    s.sugar = p.degree();
    return s;
  }

  Polynomial to(const SortedPoly& s, std::size_t nvars) const {
    Polynomial p(nvars);
    for (const auto& t : s.terms) p.add_term(t.e, t.c);
    return p;
  }

  void make_monic(SortedPoly& p) const {
    if (p.empty() || p.lead().c == 1) return;
    Rational inv = 1 / p.lead().c;
    for (auto& t : p.terms) t.c *= inv;
  }

  // f - c * x^m * g, where the terms of f before `from` are untouched.
  std::vector<Term> sub_multiple(const std::vector<Term>& f, std::size_t from, const Rational& c,
                                 const Exponent& m, const std::vector<Integer>& mkey, const SortedPoly& g) const {
    std::vector<Term> out;
    out.reserve(f.size() - from + g.terms.size());
    std::size_t i = from, j = 0;
    auto shifted = [&](const Term& t) {
      Term s{t.e, t.key, -c * t.c};
      for (std::size_t k = 0; k < s.e.size(); ++k) s.e[k] += m[k];
      for (std::size_t k = 0; k < s.key.size(); ++k) s.key[k] += mkey[k];
      return s;
    };
    std::optional<Term> gj;
    if (j < g.terms.size()) gj = shifted(g.terms[j]);
    while (i < f.size() || gj) {
      int c2 = !gj ? 1 : (i == f.size() ? -1 : cmp(f[i], *gj));
      if (c2 > 0) {
        out.push_back(f[i++]);
      } else if (c2 < 0) {
        out.push_back(std::move(*gj));
        ++j;
        gj.reset();
        if (j < g.terms.size()) gj = shifted(g.terms[j]);
      } else {
        Rational sum = f[i].c + gj->c;
        if (sum != 0) out.push_back({f[i].e, f[i].key, sum});
        ++i;
        ++j;
        gj.reset();
        if (j < g.terms.size()) gj = shifted(g.terms[j]);
      }
    }
    return out;
  }

  // Fully reduce f modulo the (monic) basis g.
  SortedPoly reduce(SortedPoly f, const std::vector<SortedPoly>& g, const std::vector<bool>* active = nullptr) const {
    std::vector<Term> done;
    std::size_t pos = 0;
    while (pos < f.terms.size()) {
      const Term& t = f.terms[pos];
      std::size_t hit = g.size();
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (active && !(*active)[k]) continue;
        if (!g[k].empty() && divides(g[k].lead().e, t.e)) {
          hit = k;
          break;
        }
      }
      if (hit == g.size()) {
        done.push_back(t);
        ++pos;
        continue;
      }
      const SortedPoly& h = g[hit];
      Exponent m(t.e.size());
      for (std::size_t k = 0; k < m.size(); ++k) m[k] = t.e[k] - h.lead().e[k];
      std::vector<Integer> mkey(t.key.size());
      for (std::size_t k = 0; k < mkey.size(); ++k) mkey[k] = t.key[k] - h.lead().key[k];
      Rational c = t.c / h.lead().c;
      f.sugar = std::max(f.sugar, total_degree(m) + h.sugar);
      f.terms = sub_multiple(f.terms, pos, c, m, mkey, h);
      pos = 0;
    }
    f.terms = std::move(done);
    return f;
  }

  SortedPoly spoly(const SortedPoly& f, const SortedPoly& g) const {
    Exponent l = lcm(f.lead().e, g.lead().e);
    Exponent mf(l.size()), mg(l.size());
    for (std::size_t k = 0; k < l.size(); ++k) {
      mf[k] = l[k] - f.lead().e[k];
      mg[k] = l[k] - g.lead().e[k];
    }
    auto keyf = order_.key(mf), keyg = order_.key(mg);
    // x^mf f / lc(f) - x^mg g / lc(g)
    std::vector<Term> a;
    Rational inv = 1 / f.lead().c;
    for (const auto& t : f.terms) {
      Term s{t.e, t.key, t.c * inv};
      for (std::size_t k = 0; k < s.e.size(); ++k) s.e[k] += mf[k];
      for (std::size_t k = 0; k < s.key.size(); ++k) s.key[k] += keyf[k];
      a.push_back(std::move(s));
    }
    SortedPoly out;
    out.terms = sub_multiple(a, 0, 1 / g.lead().c, mg, keyg, g);
    out.sugar = std::max(f.sugar + total_degree(mf), g.sugar + total_degree(mg));
    return out;
  }

  const MatrixTermOrder& order() const { return order_; }

 private:
  const MatrixTermOrder& order_;
};

struct Pair {
  std::size_t i, j;
  Exponent lcm;
  std::vector<Integer> key;
  int sugar;
};

bool coprime(const Exponent& a, const Exponent& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0 && b[k] != 0) return false;
  return true;
}

}  // namespace

Exponent leading_monomial(const Polynomial& f, const MatrixTermOrder& order) {
  if (f.is_zero()) throw ValidationError("groebner", "zero polynomial has no leading monomial");
  const Exponent* best = nullptr;
  for (const auto& [e, c] : f.terms())
    if (!best || order.compare(e, *best) > 0) best = &e;
  return *best;
}

Rational leading_coefficient(const Polynomial& f, const MatrixTermOrder& order) {
  return f.coefficient(leading_monomial(f, order));
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MatrixTermOrder& order) {
  Engine eng(order);
  return eng.to(eng.spoly(eng.from(f), eng.from(g)), std::max(f.nvars(), g.nvars()));
}

Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& g, const MatrixTermOrder& order) {
  Engine eng(order);
  std::vector<SortedPoly> basis;
  for (const auto& p : g)
    if (!p.is_zero()) basis.push_back(eng.from(p));
  return eng.to(eng.reduce(eng.from(f), basis), f.nvars());
}

std::vector<Polynomial> buchberger(const std::vector<Polynomial>& generators, const MatrixTermOrder& order) {
  const std::size_t nvars = order.nvars();
  for (const auto& g : generators)
    if (!g.is_zero() && g.nvars() != nvars)
      throw ValidationError("groebner", "generator variable count does not match the term order");
  if (!order.is_well_order()) throw ValidationError("groebner", "weight rows do not define a term order");

  Engine eng(order);
  std::vector<SortedPoly> basis;
  std::vector<bool> active;
  std::vector<Pair> pending;
  std::set<std::pair<std::size_t, std::size_t>> pending_ids;

  auto add = [&](SortedPoly h) {
    eng.make_monic(h);
    const std::size_t k = basis.size();
    basis.push_back(std::move(h));
    active.push_back(true);
    for (std::size_t i = 0; i < k; ++i) {
      if (!active[i]) continue;
      Exponent l = lcm(basis[i].lead().e, basis[k].lead().e);
      int s = std::max(basis[i].sugar + total_degree(l) - total_degree(basis[i].lead().e),
                       basis[k].sugar + total_degree(l) - total_degree(basis[k].lead().e));
      auto key = order.key(l);
      pending.push_back({i, k, std::move(l), std::move(key), s});
      pending_ids.insert({i, k});
    }
    // an element whose leading monomial is divisible by the new one stays in
    // the basis for the criteria but is dropped from the final answer
  };

  // reduce the input against itself before starting
  for (const auto& g : generators) {
    if (g.is_zero()) continue;
    SortedPoly h = eng.reduce(eng.from(g), basis, &active);
    if (!h.empty()) add(std::move(h));
  }

  auto is_pending = [&](std::size_t a, std::size_t b) {
    return pending_ids.count({std::min(a, b), std::max(a, b)}) > 0;
  };

  while (!pending.empty()) {
    auto best = std::min_element(pending.begin(), pending.end(), [&](const Pair& a, const Pair& b) {
      if (a.sugar != b.sugar) return a.sugar < b.sugar;
      return order.compare(a.key, a.lcm, b.key, b.lcm) < 0;
    });
    Pair p = std::move(*best);
    pending.erase(best);
    pending_ids.erase({p.i, p.j});

    if (coprime(basis[p.i].lead().e, basis[p.j].lead().e)) continue;
    bool chain = false;
    for (std::size_t k = 0; k < basis.size() && !chain; ++k) {
      if (k == p.i || k == p.j) continue;
      if (divides(basis[k].lead().e, p.lcm) && !is_pending(p.i, k) && !is_pending(p.j, k)) chain = true;
    }
    if (chain) continue;

    SortedPoly h = eng.reduce(eng.spoly(basis[p.i], basis[p.j]), basis);
    if (!h.empty()) add(std::move(h));
  }

  // minimal basis: drop elements whose leading monomial another one divides
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      if (divides(basis[j].lead().e, basis[i].lead().e) && (basis[j].lead().e != basis[i].lead().e || j < i))
        redundant = true;
    }
    if (!redundant) keep.push_back(i);
  }
  std::vector<SortedPoly> minimal;
  for (auto i : keep) minimal.push_back(basis[i]);

  // interreduce tails
  std::vector<SortedPoly> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<SortedPoly> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    SortedPoly head;
    head.terms.push_back(minimal[i].terms.front());
    SortedPoly tail;
    tail.terms.assign(minimal[i].terms.begin() + 1, minimal[i].terms.end());
    tail = eng.reduce(std::move(tail), others);
    head.terms.insert(head.terms.end(), tail.terms.begin(), tail.terms.end());
    eng.make_monic(head);
    reduced.push_back(std::move(head));
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const SortedPoly& a, const SortedPoly& b) { return eng.cmp(a.lead(), b.lead()) > 0; });

  std::vector<Polynomial> out;
  for (const auto& r : reduced) out.push_back(eng.to(r, nvars));
  return out;
}

bool is_groebner_basis(const std::vector<Polynomial>& g, const MatrixTermOrder& order) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (!normal_form(s_polynomial(g[i], g[j], order), g, order).is_zero()) return false;
  return true;
}

std::vector<Polynomial> saturate(const std::vector<Polynomial>& generators, const Polynomial& f,
                                 const MatrixTermOrder& order) {
  if (f.is_zero()) throw ValidationError("saturate", "cannot saturate by the zero polynomial");
  const std::size_t n = order.nvars();
  // block order: t first, then the given order on the original variables
  std::vector<RationalVector> rows;
  RationalVector t_row(n + 1, Rational(0));
  t_row[n] = 1;
  rows.push_back(t_row);
  for (const auto& r : order.rows()) {
    RationalVector ext = r;
    ext.push_back(0);
    rows.push_back(std::move(ext));
  }
  MatrixTermOrder elim(n + 1, std::move(rows));

  std::vector<Polynomial> ext;
  for (const auto& g : generators) ext.push_back(g.extended(1));
  Exponent t(n + 1, 0);
  t[n] = 1;
  Polynomial one_minus_tf = Polynomial::constant(n + 1, Rational(1)) - f.extended(1).times_monomial(t, Rational(1));
  ext.push_back(one_minus_tf);

  std::vector<Polynomial> out;
  for (const auto& g : buchberger(ext, elim)) {
    bool has_t = false;
    for (const auto& [e, c] : g.terms()) has_t = has_t || e[n] != 0;
    if (!has_t) out.push_back(g.truncated(n));
  }
  return out;
}

std::vector<Polynomial> lattice_basis_ideal(const IntegerMatrix& kernel_rows) {
  std::vector<Polynomial> out;
  for (std::size_t r = 0; r < kernel_rows.rows(); ++r) {
    std::vector<long> l(kernel_rows.cols());
    for (std::size_t j = 0; j < l.size(); ++j) l[j] = kernel_rows(r, j).get_si();
    out.push_back(Polynomial::binomial(l));
  }
  return out;
}

std::vector<Polynomial> toric_ideal(const IntegerPointConfig& a, std::optional<MatrixTermOrder> order) {
  const std::size_t n = a.n();
  MatrixTermOrder ord = order ? *order : MatrixTermOrder::grevlex(n);
  IntegerMatrix kernel = integer_kernel(a.matrix());
  if (kernel.rows() == 0) return {};
  std::vector<Polynomial> ideal = lattice_basis_ideal(kernel);
  // I : (d1 ... dn)^inf, one variable at a time
  for (std::size_t j = 0; j < n; ++j) ideal = saturate(ideal, Polynomial::variable(n, j), ord);
  return ideal;
}

MonomialIdeal::MonomialIdeal(std::size_t nvars, std::vector<Exponent> generators) : nvars_(nvars) {
  std::sort(generators.begin(), generators.end(), [](const Exponent& a, const Exponent& b) {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  });
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  for (const auto& g : generators) {
    if (g.size() != nvars_) throw ValidationError("monomial_ideal", "generator length mismatch");
    bool redundant = false;
    for (const auto& h : gens_) redundant = redundant || divides(h, g);
    if (!redundant) gens_.push_back(g);
  }
}

bool MonomialIdeal::contains(const Exponent& e) const {
  return std::any_of(gens_.begin(), gens_.end(), [&](const Exponent& g) { return divides(g, e); });
}

std::string MonomialIdeal::to_string() const {
  std::string s = "<";
  for (std::size_t i = 0; i < gens_.size(); ++i) s += (i ? ", " : "") + monomial_to_string(gens_[i]);
  return s + ">";
}

Polynomial initial_form(const Polynomial& f, const RationalVector& w) {
  Polynomial out(f.nvars());
  if (f.is_zero()) return out;
  std::optional<Rational> top;
  for (const auto& [e, c] : f.terms()) {
    Rational v = weight_of(w, e);
    if (!top || v > *top) top = v;
  }
  for (const auto& [e, c] : f.terms())
    if (weight_of(w, e) == *top) out.add_term(e, c);
  return out;
}

InitialIdeal initial_ideal(const std::vector<Polynomial>& generators, const RationalVector& w) {
  InitialIdeal res;
  const std::size_t n = w.size();
  bool all_zero = std::all_of(generators.begin(), generators.end(), [](const Polynomial& p) { return p.is_zero(); });
  if (all_zero) {
    res.is_monomial = true;
    res.monomial = MonomialIdeal(n, {});
    return res;
  }
  RationalVector shifted = w;
  Rational lowest = *std::min_element(w.begin(), w.end());
  if (lowest < 0) {
    bool homogeneous = std::all_of(generators.begin(), generators.end(),
                                   [](const Polynomial& p) { return p.is_homogeneous(); });
    if (!homogeneous) throw ValidationError("initial_ideal", "negative weight on an inhomogeneous ideal");
    for (auto& v : shifted) v -= lowest;
  }
  MatrixTermOrder order(n, {shifted});
  res.groebner_basis = buchberger(generators, order);
  res.is_monomial = true;
  std::vector<Exponent> leads;
  for (const auto& g : res.groebner_basis) {
    Polynomial in = initial_form(g, w);
    if (!in.is_monomial()) res.is_monomial = false;
    leads.push_back(leading_monomial(g, order));
    res.generators.push_back(std::move(in));
  }
  if (res.is_monomial) res.monomial = MonomialIdeal(n, leads);
  return res;
}

}  // namespace gkz
