#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gkz/pipeline.hpp"

namespace gkz {

// Either text, "d n" on the first line followed by the entries (or just one
// row per line), or JSON: {"rows": [[...], ...]} or a bare array of rows.
IntegerPointConfig parse_matrix(std::string_view text);
std::string read_file(const std::string& path);
IntegerPointConfig read_matrix_file(const std::string& path);

// Rationals are written as "p/q" strings, index sets 1-based.
nlohmann::json to_json(const IntegerPointConfig& a);
nlohmann::json index_set_json(const IndexSet& s);
nlohmann::json to_json(const RationalVector& v);
nlohmann::json to_json(const Triangulation& t);
nlohmann::json to_json(const StandardPair& p);
nlohmann::json to_json(const std::vector<StandardPair>& pairs);
nlohmann::json to_json(const AffineExponent& e);
nlohmann::json to_json(const CertifiedWeight& w);
// With terms: [{kprime, gammaArgs}] up to the family's truncation.
nlohmann::json to_json(const TruncatedSeriesFamily& f, bool with_terms);
nlohmann::json to_json(const SolutionBranch& b);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const RelationReport& r, const std::vector<SolutionBranch>& branches);
nlohmann::json to_json(const SolveResult& r);

std::string to_string(const IndexSet& s);  // "{3,4}"

}  // namespace gkz
