#pragma once

#include <optional>
#include <vector>

#include "gkz/groebner.hpp"
#include "gkz/lattice.hpp"

namespace gkz {

struct StandardPair {
  Exponent root;  // a, zero on the face
  IndexSet face;  // T, sorted

  friend bool operator==(const StandardPair&, const StandardPair&) = default;
};

// Sort key used for canonical output: face, then root lexicographically.
bool operator<(const StandardPair& a, const StandardPair& b);

// Every monomial d^(a+u) with supp(u) in T lies outside M.
bool is_admissible(const MonomialIdeal& m, const Exponent& a, const IndexSet& face);

// Complete standard pair decomposition of M, canonically sorted.
std::vector<StandardPair> standard_pairs(const MonomialIdeal& m);

// Number of pairs whose face has `dimension` elements.
std::size_t count_pairs_of_size(const std::vector<StandardPair>& pairs, std::size_t dimension);

// The number of top-dimensional standard pairs of in_{w(eps)} I_{A~}, with
// w~ = (1, ..., 1, 0) when no base weight is given.
std::size_t rank_by_count(const IntegerPointConfig& a, std::optional<RationalVector> base_weight = std::nullopt);

std::string to_string(const StandardPair& p);

}  // namespace gkz
