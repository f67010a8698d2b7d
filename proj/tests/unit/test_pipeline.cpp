#include <string>

#include "corpus.hpp"
#include "doctest.h"
#include "gkz/errors.hpp"
#include "gkz/io.hpp"
#include "gkz/pipeline.hpp"

using namespace gkz;

namespace {

IntegerPointConfig two_by_three() { return IntegerPointConfig::from_rows({{1, 0, 2}, {0, 1, 1}}); }

std::size_t parse_offset(std::string_view text) {
  try {
    parse_matrix(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("matrix text formats") {
  CHECK(parse_matrix("1 3\n1 2 3\n") == testing::row_123());
  CHECK(parse_matrix("1 2 3") == testing::row_123());
  CHECK(parse_matrix("# a comment\n1, 2, 3  # trailing\n") == testing::row_123());
  CHECK(parse_matrix("2 3\n1 0 2\n0 1 1") == two_by_three());
  CHECK(parse_matrix("2 3\n1 0 2 0 1 1") == two_by_three());
  CHECK(parse_matrix("1 0 2 / 0 1 1") == two_by_three());
  CHECK(parse_matrix("1 0 2\n0 1 1\n") == two_by_three());
  // two entries on one line and nothing else is a 1 x 2 matrix, not a header
  CHECK(parse_matrix("2 1") == IntegerPointConfig::from_rows({{2, 1}}));
  // leading zeros are decimal
  CHECK(parse_matrix("010 3") == IntegerPointConfig::from_rows({{10, 3}}));
}

TEST_CASE("matrix JSON formats") {
  CHECK(parse_matrix(R"({"rows": [[1, 2, 3]]})") == testing::row_123());
  CHECK(parse_matrix("[[1,0,2],[0,1,1]]") == two_by_three());
  CHECK(parse_matrix(R"([["1","2","3"]])") == testing::row_123());
  CHECK(parse_matrix(to_json(two_by_three()).dump()) == two_by_three());
}

TEST_CASE("matrix parse errors carry offsets") {
  CHECK(parse_offset("1 2 x") == 4);
  CHECK(parse_offset("1 2 3\n4 5") == 0);
  CHECK(parse_offset("") == 0);
  CHECK(parse_offset("[[1, 2], [3]]") == 0);
  CHECK(parse_offset("[[1, 2.5]]") == 0);
  CHECK(parse_offset("{\"rows\": [[1, 2]") != std::string::npos);
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/matrix"), ValidationError);
}

TEST_CASE("config validation") {
  PipelineConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.radius = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = PipelineConfig{};
  cfg.truncation = -1;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = PipelineConfig{};
  cfg.format = "xml";
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = PipelineConfig{};
  cfg.base_weight = RationalVector{1, 1};
  CHECK_THROWS_AS(solve(testing::row_123(), cfg), ValidationError);
}

TEST_CASE("solve is deterministic and serializes the same way twice") {
  PipelineConfig cfg;
  const auto a = two_by_three();
  const std::string first = to_json(solve(a, cfg)).dump();
  const std::string second = to_json(solve(a, cfg)).dump();
  CHECK(first == second);
  const auto j = nlohmann::json::parse(first);
  CHECK(j["volume"] == 3);
  CHECK(j["branches"].size() == 3);
  CHECK(j["matrix"] == nlohmann::json::parse("[[1,0,2],[0,1,1]]"));
}

TEST_CASE("verification report") {
  PipelineConfig cfg;
  const SolveResult r = solve(testing::row_123(), cfg);
  const VerificationReport a = verify(r, cfg);
  const VerificationReport b = verify(r, cfg);
  CHECK(a.passed());
  CHECK(a.region_ok);
  CHECK(a.rank_matches_volume);
  CHECK(a.s == b.s);
  CHECK(a.s[0].get_den() == 97);
  const auto j = to_json(a);
  CHECK(j["passed"] == true);
  CHECK(j["branches"].size() == 3);
  CHECK(j["branches"][0]["shift_residuals"].size() == 3);
  CHECK(j.dump() == to_json(b).dump());
  // the seed changes the sampled parameter
  PipelineConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK(verify(r, other).s != a.s);
}

TEST_CASE("series JSON lists Gamma arguments") {
  PipelineConfig cfg;
  cfg.truncation = 3;
  const SolveResult r = solve(testing::row_123(), cfg);
  const auto j = to_json(r.series[0], true);
  REQUIRE(j["terms"].size() >= 1);
  CHECK(j["terms"][0]["gammaArgs"].size() == 3);
  CHECK(j["leading_monomial"] == r.series[0].leading_monomial());
}

TEST_CASE("probe points stay in the region") {
  PipelineConfig cfg;
  for (const auto& a : testing::corpus(8)) {
    const SolveResult r = solve(a, cfg);
    const EvaluationPoint p = choose_evaluation_point(a, r.weight.weight.entries, r.triangulation.simplices);
    std::size_t inside = 0;
    const auto points = probe_points(p, a, 4, 1);
    for (const auto& q : points) {
      std::vector<double> psi;
      for (double v : q.x) psi.push_back(-std::log(v));
      psi.push_back(0.0);
      bool ok = true;
      for (const auto& tau : r.triangulation.simplices) ok = ok && region_member(r.homogenized, tau, psi, cfg.radius);
      inside += ok;
    }
    CHECK(inside >= points.size() - 1);
  }
}
