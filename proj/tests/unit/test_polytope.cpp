#include <algorithm>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "gkz/errors.hpp"
#include "gkz/polytope.hpp"
#include "gkz/standard_pairs.hpp"

using namespace gkz;

namespace {

using Pt = std::pair<long, long>;

long cross(Pt o, Pt a, Pt b) { return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first); }

// twice the area of the convex hull (Andrew's monotone chain + shoelace)
long hull_twice_area(std::vector<Pt> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return 0;
  std::vector<Pt> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  long s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Pt& a = h[i];
    const Pt& b = h[(i + 1) % h.size()];
    s += a.first * b.second - a.second * b.first;
  }
  return std::labs(s);
}

long volume_oracle(const IntegerPointConfig& a) {
  if (a.d() == 1) {
    long lo = 0, hi = 0;
    for (std::size_t j = 0; j < a.n(); ++j) {
      lo = std::min(lo, a(0, j).get_si());
      hi = std::max(hi, a(0, j).get_si());
    }
    return hi - lo;
  }
  REQUIRE(a.d() == 2);
  std::vector<Pt> pts{{0, 0}};
  for (std::size_t j = 0; j < a.n(); ++j) pts.push_back({a(0, j).get_si(), a(1, j).get_si()});
  return hull_twice_area(pts);
}

RationalVector base_weight(std::size_t n) {
  RationalVector w(n, Rational(1));
  w.back() = 0;
  return w;
}

}  // namespace

TEST_CASE("normalized volume examples") {
  CHECK(normalized_volume(gkz::testing::row_123()) == 3);
  CHECK(normalized_volume(homogenize(gkz::testing::row_123())) == 3);
  for (std::size_t d = 1; d <= 3; ++d) CHECK(normalized_volume(IntegerPointConfig(IntegerMatrix::identity(d))) == 1);
  CHECK(normalized_volume(IntegerPointConfig::from_rows({{1, 0, 1}, {0, 1, 1}})) == 2);
  CHECK(normalized_volume(IntegerPointConfig::from_rows({{-1, 2}})) == 3);
}

TEST_CASE("normalized volume matches the hull oracle and is preserved by homogenization") {
  for (const auto& a : gkz::testing::corpus()) {
    CHECK(normalized_volume(a) == volume_oracle(a));
    CHECK(normalized_volume(homogenize(a)) == normalized_volume(a));
  }
}

TEST_CASE("simplex volume examples") {
  auto at = homogenize(gkz::testing::row_123());
  CHECK(simplex_volume(at, {2, 3}) == 3);
  CHECK(simplex_volume(at, {1, 3}) == 2);
  CHECK(simplex_volume(IntegerPointConfig(IntegerMatrix::identity(3)), {0, 1, 2}) == 1);
  CHECK_THROWS_AS(simplex_volume(IntegerPointConfig::from_rows({{1, 2}, {2, 4}}), {0, 1}), ValidationError);
}

TEST_CASE("regular triangulation of the homogenized (1 2 3)") {
  auto at = homogenize(gkz::testing::row_123());
  Triangulation t = regular_triangulation(at, {Rational(101, 100), 1, 1, 0});
  CHECK(t.simplices == std::vector<IndexSet>{{2, 3}});
  // a lifting that puts every point on one hyperplane is a tie
  CHECK_THROWS_AS(regular_triangulation(at, {0, 0, 0, 0}), CertificationError);
  // the unperturbed weight also leaves a tie
  CHECK_THROWS_AS(regular_triangulation(at, {1, 1, 1, 1}), CertificationError);
  CHECK(regular_triangulation(IntegerPointConfig::from_rows({{1}}), {0}).simplices == std::vector<IndexSet>{{0}});
  // a strictly convex lifting triangulates into unit segments
  Triangulation fine = regular_triangulation(at, {1, 4, 9, 0});
  CHECK(fine.simplices == std::vector<IndexSet>{{0, 1}, {0, 3}, {1, 2}});
}

TEST_CASE("certified weight reproduces the initial ideal for an explicit direction") {
  auto at = homogenize(gkz::testing::row_123());
  PerturbationOptions opt;
  opt.direction = RationalVector{1, 0, 0, 0};
  opt.epsilon = Rational(1, 100);
  CertifiedWeight cw = perturbed_weight(at, base_weight(4), opt);
  MonomialIdeal expected(4, {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {0, 3, 0, 0}});
  CHECK(cw.initial == expected);
  CHECK(cw.weight.entries == RationalVector{Rational(101, 100), 1, 1, 0});
  REQUIRE(cw.weight.perturbation);
  CHECK(cw.weight.perturbation->epsilon == Rational(1, 100));
}

TEST_CASE("default direction and epsilon schedule") {
  auto at = homogenize(gkz::testing::row_123());
  CertifiedWeight cw = perturbed_weight(at, base_weight(4));
  MonomialIdeal expected(4, {{2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {0, 3, 0, 0}});
  CHECK(cw.initial == expected);
  REQUIRE(cw.weight.perturbation);
  CHECK(cw.weight.perturbation->direction.back() == 0);
  CHECK(cw.weight.perturbation->halvings >= 4);
  // the certified weight's own initial ideal is monomial and equal
  InitialIdeal in = initial_ideal(toric_ideal(at), cw.weight.entries);
  REQUIRE(in.is_monomial);
  CHECK(*in.monomial == expected);
}

TEST_CASE("zero ideal: any weight is interior") {
  CertifiedWeight cw = perturbed_weight(std::vector<Polynomial>{}, RationalVector{3, 1});
  CHECK(cw.weight.entries == RationalVector{3, 1});
  CHECK(cw.initial.is_zero());
}

TEST_CASE("bad explicit epsilon or direction is rejected") {
  auto at = homogenize(gkz::testing::row_123());
  PerturbationOptions opt;
  opt.direction = RationalVector{1, 0, 0, 0};
  opt.epsilon = Rational(0);  // leaves the base weight's ties
  CHECK_THROWS_AS(perturbed_weight(at, base_weight(4), opt), CertificationError);
  opt.epsilon.reset();
  opt.direction = RationalVector{0, 0, 0, 0};
  CHECK_THROWS_AS(perturbed_weight(at, base_weight(4), opt), CertificationError);
  opt.direction = RationalVector{1, 0, 0, 1};
  CHECK_THROWS_AS(perturbed_weight(at, base_weight(4), opt), ValidationError);
}

TEST_CASE("triangulation invariants on the corpus") {
  for (const auto& a : gkz::testing::corpus()) {
    auto at = homogenize(a);
    CertifiedWeight cw = perturbed_weight(at, base_weight(at.n()));
    Triangulation t = regular_triangulation(at, cw.weight.entries);
    Integer total = 0;
    for (const auto& tau : t.simplices) {
      total += simplex_volume(at, tau);
      CHECK(std::find(tau.begin(), tau.end(), at.n() - 1) != tau.end());
    }
    CHECK(total == normalized_volume(at));

    // algebraic route: maximal faces carrying standard pairs are the simplices,
    // and each simplex carries |det| pairs
    auto pairs = standard_pairs(cw.initial);
    std::vector<IndexSet> faces;
    for (const auto& p : pairs)
      if (p.face.size() == at.d()) faces.push_back(p.face);
    std::sort(faces.begin(), faces.end());
    std::vector<IndexSet> distinct = faces;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    CHECK(distinct == t.simplices);
    for (const auto& tau : t.simplices)
      CHECK(Integer(static_cast<long>(std::count(faces.begin(), faces.end(), tau))) == simplex_volume(at, tau));

    // shifting the weight by a multiple of (1, ..., 1) changes nothing
    for (Rational s : {Rational(2, 3), Rational(-1, 5), Rational(7)}) {
      RationalVector shifted = cw.weight.entries;
      for (auto& v : shifted) v += s;
      CHECK(regular_triangulation(at, shifted).simplices == t.simplices);
    }
  }
}

TEST_CASE("index subsets") {
  CHECK(index_subsets(4, 2).size() == 6);
  CHECK(index_subsets(3, 0) == std::vector<IndexSet>{{}});
  CHECK(index_subsets(2, 3).empty());
  CHECK(complement_of({1, 3}, 5) == IndexSet{0, 2, 4});
}
