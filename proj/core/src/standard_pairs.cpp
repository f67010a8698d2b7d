#include "gkz/standard_pairs.hpp"

#include <algorithm>

#include "gkz/polytope.hpp"

namespace gkz {

bool operator<(const StandardPair& a, const StandardPair& b) {
  if (a.face != b.face) return a.face < b.face;
  return a.root < b.root;
}

bool is_admissible(const MonomialIdeal& m, const Exponent& a, const IndexSet& face) {
  for (const auto& g : m.generators()) {
    bool witness = false;
    for (std::size_t j = 0; j < a.size() && !witness; ++j) {
      if (std::binary_search(face.begin(), face.end(), j)) continue;
      witness = g[j] > a[j];
    }
    if (!witness) return false;
  }
  return true;
}

std::vector<StandardPair> standard_pairs(const MonomialIdeal& m) {
  const std::size_t n = m.nvars();
  std::vector<int> cap(n, 0);
  for (const auto& g : m.generators())
    for (std::size_t j = 0; j < n; ++j) cap[j] = std::max(cap[j], g[j]);

  std::vector<StandardPair> out;
  for (std::size_t size = 0; size <= n; ++size) {
    for (const auto& face : index_subsets(n, size)) {
      if (!is_admissible(m, Exponent(n, 0), face)) continue;
      IndexSet off = complement_of(face, n);
      // roots: 0 <= a_j < cap_j off the face; a larger a_j is never maximal
      Exponent a(n, 0);
      for (;;) {
        if (is_admissible(m, a, face)) {
          bool maximal = true;
          for (std::size_t j : off) {
            Exponent b = a;
            b[j] = 0;
            IndexSet bigger = face;
            bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), j), j);
            if (is_admissible(m, b, bigger)) {
              maximal = false;
              break;
            }
          }
          if (maximal) out.push_back({a, face});
        }
        std::size_t k = 0;
        while (k < off.size() && a[off[k]] + 1 >= cap[off[k]]) a[off[k++]] = 0;
        if (k == off.size()) break;
        ++a[off[k]];
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_pairs_of_size(const std::vector<StandardPair>& pairs, std::size_t dimension) {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [&](const StandardPair& p) { return p.face.size() == dimension; }));
}

std::size_t rank_by_count(const IntegerPointConfig& a, std::optional<RationalVector> base_weight) {
  IntegerPointConfig at = homogenize(a);
  RationalVector w = base_weight ? *base_weight : RationalVector(at.n(), Rational(1));
  if (!base_weight) w.back() = 0;
  CertifiedWeight cw = perturbed_weight(at, w);
  return count_pairs_of_size(standard_pairs(cw.initial), at.d());
}

std::string to_string(const StandardPair& p) {
  std::string s = "(" + monomial_to_string(p.root) + ", {";
  for (std::size_t i = 0; i < p.face.size(); ++i) s += (i ? "," : "") + std::to_string(p.face[i] + 1);
  return s + "})";
}

}  // namespace gkz
