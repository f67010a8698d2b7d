#include <algorithm>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "gkz/polytope.hpp"
#include "gkz/standard_pairs.hpp"

using namespace gkz;

namespace {

// Box-cover oracle: every monomial of degree <= `deg` is either in M or lies in
// the span of some pair, and every pair claims only standard monomials.
void check_cover(const MonomialIdeal& m, const std::vector<StandardPair>& pairs, int deg) {
  const std::size_t n = m.nvars();
  Exponent e(n, 0);
  for (;;) {
    if (total_degree(e) <= deg) {
      bool covered = false;
      for (const auto& p : pairs) {
        bool claims = true;
        for (std::size_t j = 0; j < n && claims; ++j) {
          bool on_face = std::binary_search(p.face.begin(), p.face.end(), j);
          claims = on_face ? e[j] >= p.root[j] : e[j] == p.root[j];
        }
        if (claims) {
          covered = true;
          CHECK_FALSE(m.contains(e));
        }
      }
      CHECK(covered != m.contains(e));
    }
    std::size_t k = 0;
    while (k < n && e[k] == deg) e[k++] = 0;
    if (k == n) break;
    ++e[k];
  }
}

}  // namespace

TEST_CASE("standard pairs of the example initial ideal") {
  MonomialIdeal m(4, {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {0, 3, 0, 0}});
  auto pairs = standard_pairs(m);
  std::vector<StandardPair> expected{{{0, 0, 0, 0}, {2, 3}}, {{0, 1, 0, 0}, {2, 3}}, {{0, 2, 0, 0}, {2, 3}}};
  std::vector<StandardPair> top;
  for (const auto& p : pairs)
    if (p.face.size() == 2) top.push_back(p);
  CHECK(top == expected);
  // plus one embedded pair: d1 * C[d4] is standard but lies in no top-dimensional pair
  CHECK(pairs.size() == 4);
  CHECK(std::find(pairs.begin(), pairs.end(), StandardPair{{1, 0, 0, 0}, {3}}) != pairs.end());
  check_cover(m, pairs, 5);
}

TEST_CASE("standard pairs small cases") {
  CHECK(standard_pairs(MonomialIdeal(1, {})) == std::vector<StandardPair>{{{0}, {0}}});
  auto x2 = standard_pairs(MonomialIdeal(2, {{2, 0}}));
  CHECK(x2 == std::vector<StandardPair>{{{0, 0}, {1}}, {{1, 0}, {1}}});
  // an embedded component yields a lower-dimensional pair
  MonomialIdeal emb(2, {{2, 0}, {1, 1}});
  auto pe = standard_pairs(emb);
  CHECK(pe == std::vector<StandardPair>{{{1, 0}, {}}, {{0, 0}, {1}}});
  check_cover(emb, pe, 5);
}

TEST_CASE("box-cover oracle on random monomial ideals") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> e(0, 3);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Exponent> gens;
    for (int g = 0; g < 3; ++g) gens.push_back({e(rng), e(rng), e(rng)});
    gens.erase(std::remove(gens.begin(), gens.end(), Exponent{0, 0, 0}), gens.end());
    MonomialIdeal m(3, gens);
    auto pairs = standard_pairs(m);
    check_cover(m, pairs, 5);
    for (const auto& p : pairs) CHECK(is_admissible(m, p.root, p.face));
    CHECK(std::is_sorted(pairs.begin(), pairs.end()));
  }
}

TEST_CASE("rank by count equals the normalized volume") {
  CHECK(rank_by_count(gkz::testing::row_123()) == 3);
  CHECK(rank_by_count(IntegerPointConfig(IntegerMatrix::identity(2))) == 1);
  for (const auto& a : gkz::testing::corpus()) {
    auto at = homogenize(a);
    RationalVector w(at.n(), Rational(1));
    w.back() = 0;
    CertifiedWeight cw = perturbed_weight(at, w);
    auto pairs = standard_pairs(cw.initial);
    check_cover(cw.initial, pairs, 4);
    for (const auto& p : pairs)
      if (p.face.size() == at.d()) CHECK(std::binary_search(p.face.begin(), p.face.end(), at.n() - 1));
    CHECK(Integer(static_cast<long>(count_pairs_of_size(pairs, at.d()))) == normalized_volume(a));
    // generators of the initial ideal never involve the last variable
    for (const auto& g : cw.initial.generators()) CHECK(g.back() == 0);
  }
}
