#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gkz/groebner.hpp"
#include "gkz/lattice.hpp"

namespace gkz {

struct WeightPerturbation {
  RationalVector base;       // w
  RationalVector direction;  // v
  Rational epsilon;          // w(eps) = w + eps v
  unsigned halvings = 0;     // eps = 1 / 2^halvings when taken from the schedule
};

struct WeightVector {
  RationalVector entries;
  std::optional<WeightPerturbation> perturbation;
};

struct Triangulation {
  std::vector<IndexSet> simplices;  // sorted index sets, sorted lexicographically
  RationalVector weight;
};

// d! times the Euclidean volume of conv({0} and the columns of A).
Integer normalized_volume(const IntegerPointConfig& a);

// |det A_tau|; throws ValidationError on a singular minor.
Integer simplex_volume(const IntegerPointConfig& a, const IndexSet& tau);

// Regular triangulation of the vector configuration induced by w: tau is a
// cell iff the linear functional c with c.a_j = w_j on tau satisfies
// c.a_j < w_j off tau. Ties raise CertificationError.
Triangulation regular_triangulation(const IntegerPointConfig& a, const RationalVector& w);

struct PerturbationOptions {
  std::optional<RationalVector> direction;  // default: lexicographic-type tiebreak
  std::optional<Rational> epsilon;          // default: schedule 1/2^k, k = 4..64
  bool homogenized = true;                  // last coordinate of v is 0
};

struct CertifiedWeight {
  WeightVector weight;                  // w(eps), perturbation record filled in
  MatrixTermOrder order;                // [w, v] + grevlex
  std::vector<Polynomial> groebner_basis;  // reduced, under `order`
  MonomialIdeal initial;                // in_{w(eps)} I
};

// Certifies that w(eps) = w + eps v lies in the interior of a maximal
// Groebner cone of the ideal generated by `ideal`: every basis element has a
// strictly w(eps)-heaviest leading term, and the basis recomputed under
// [w(eps)] + grevlex has the same leading monomials.
CertifiedWeight perturbed_weight(const std::vector<Polynomial>& ideal, const RationalVector& w,
                                 const PerturbationOptions& options = {});
CertifiedWeight perturbed_weight(const IntegerPointConfig& a, const RationalVector& w,
                                 const PerturbationOptions& options = {});

// Sorted complement of tau in {0, ..., n-1}.
IndexSet complement_of(const IndexSet& tau, std::size_t n);

// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<IndexSet> index_subsets(std::size_t n, std::size_t k);

}  // namespace gkz
