#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gkz/lattice.hpp"
#include "gkz/polynomial.hpp"
#include "gkz/term_order.hpp"

namespace gkz {

Exponent leading_monomial(const Polynomial& f, const MatrixTermOrder& order);
Rational leading_coefficient(const Polynomial& f, const MatrixTermOrder& order);
Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MatrixTermOrder& order);

// Full reduction of f modulo g (remainder of the division algorithm).
Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& g, const MatrixTermOrder& order);

// Reduced, monic Groebner basis sorted by decreasing leading monomial.
std::vector<Polynomial> buchberger(const std::vector<Polynomial>& generators, const MatrixTermOrder& order);

// Every S-polynomial of g reduces to zero.
bool is_groebner_basis(const std::vector<Polynomial>& g, const MatrixTermOrder& order);

// Reduced Groebner basis (under `order`) of I : f^infinity, computed by
// eliminating an auxiliary variable t from I + <1 - t f>.
std::vector<Polynomial> saturate(const std::vector<Polynomial>& generators, const Polynomial& f,
                                 const MatrixTermOrder& order);

// Binomials d^{l+} - d^{l-} for the rows of a kernel lattice basis.
std::vector<Polynomial> lattice_basis_ideal(const IntegerMatrix& kernel_rows);

// Reduced Groebner basis of the toric ideal I_A under `order` (grevlex when
// omitted): the lattice basis ideal saturated by every variable.
std::vector<Polynomial> toric_ideal(const IntegerPointConfig& a, std::optional<MatrixTermOrder> order = std::nullopt);

class MonomialIdeal {
 public:
  MonomialIdeal() = default;
  MonomialIdeal(std::size_t nvars, std::vector<Exponent> generators);

  std::size_t nvars() const noexcept { return nvars_; }
  // Minimal generators, sorted by degree then lexicographically.
  const std::vector<Exponent>& generators() const noexcept { return gens_; }
  bool contains(const Exponent& e) const;
  bool is_zero() const noexcept { return gens_.empty(); }
  std::string to_string() const;

  friend bool operator==(const MonomialIdeal&, const MonomialIdeal&) = default;

 private:
  std::size_t nvars_ = 0;
  std::vector<Exponent> gens_;
};

struct InitialIdeal {
  std::vector<Polynomial> generators;     // w-initial forms of the Groebner basis
  std::vector<Polynomial> groebner_basis;  // under [w] + grevlex
  bool is_monomial = false;
  std::optional<MonomialIdeal> monomial;   // set when is_monomial
};

// Ideal of w-initial forms of the ideal generated by `generators`.
// Negative weights are allowed for homogeneous input (shifted by a multiple
// of (1, ..., 1), which leaves the initial ideal unchanged).
InitialIdeal initial_ideal(const std::vector<Polynomial>& generators, const RationalVector& w);

// Initial form of f: its terms of maximal w-weight.
Polynomial initial_form(const Polynomial& f, const RationalVector& w);

}  // namespace gkz
