#include "gkz/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "gkz/errors.hpp"

namespace gkz {

namespace {

using nlohmann::json;

IntegerPointConfig from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t at) {
  if (rows.empty() || rows.front().empty()) throw ParseError("matrix", "empty matrix", at);
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw ParseError("matrix", "rows have different lengths", at);
  IntegerMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return IntegerPointConfig(m);
}

IntegerPointConfig parse_json_matrix(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("matrix", "invalid JSON", e.byte > 0 ? e.byte - 1 : 0);
  }
  const json& rows = j.is_object() ? j.value("rows", json()) : j;
  if (!rows.is_array()) throw ParseError("matrix", "expected an array of rows", 0);
  std::vector<std::vector<Integer>> out;
  for (const auto& r : rows) {
    if (!r.is_array()) throw ParseError("matrix", "expected an array of rows", 0);
    std::vector<Integer> row;
    for (const auto& v : r) {
      if (v.is_number_integer()) row.emplace_back(static_cast<long>(v.get<std::int64_t>()));
      else if (v.is_string()) row.emplace_back(v.get<std::string>(), 10);
      else throw ParseError("matrix", "entries must be integers", 0);
    }
    out.push_back(std::move(row));
  }
  return from_rows(out, 0);
}

struct Token {
  std::string text;
  std::size_t at;
  std::size_t line;
};

}  // namespace

IntegerPointConfig parse_matrix(std::string_view text) {
  std::size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  if (first < text.size() && (text[first] == '{' || text[first] == '[')) return parse_json_matrix(text);

  std::vector<Token> tokens;
  std::size_t line = 0, pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '#') {
      while (pos < text.size() && text[pos] != '\n') ++pos;
    } else if (c == '\n') {
      ++line;
      ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '/') {
      // '/' separates rows on a single line
      if (c == '/') ++line;
      ++pos;
    } else {
      const std::size_t start = pos;
      if (c == '-' || c == '+') ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start || (pos == start + 1 && (c == '-' || c == '+')))
        throw ParseError("matrix", std::string("unexpected '") + c + "'", start);
      tokens.push_back({std::string(text.substr(start, pos - start)), start, line});
    }
  }
  if (tokens.empty()) throw ParseError("matrix", "empty matrix", 0);
  auto value = [](const Token& t) { return Integer(t.text[0] == '+' ? t.text.substr(1) : t.text, 10); };

  std::vector<std::vector<Integer>> rows;
  // "d n" header: exactly two tokens on the first line and d * n entries after it
  std::size_t header_end = 0;
  while (header_end < tokens.size() && tokens[header_end].line == tokens[0].line) ++header_end;
  if (header_end == 2 && tokens.size() > 2) {
    const Integer d = value(tokens[0]), n = value(tokens[1]);
    if (d > 0 && n > 0 && Integer(tokens.size() - 2) == d * n) {
      const std::size_t dd = d.get_ui(), nn = n.get_ui();
      for (std::size_t i = 0; i < dd; ++i) {
        rows.emplace_back();
        for (std::size_t j = 0; j < nn; ++j) rows.back().push_back(value(tokens[2 + i * nn + j]));
      }
      return from_rows(rows, tokens[0].at);
    }
  }
  std::size_t current = tokens[0].line;
  rows.emplace_back();
  for (const auto& t : tokens) {
    if (t.line != current) {
      rows.emplace_back();
      current = t.line;
    }
    rows.back().push_back(value(t));
  }
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw ParseError("matrix", "rows have different lengths", tokens[0].at);
  return from_rows(rows, tokens[0].at);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IntegerPointConfig read_matrix_file(const std::string& path) { return parse_matrix(read_file(path)); }

std::string to_string(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

json to_json(const IntegerPointConfig& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.d(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.n(); ++j) row.push_back(a(i, j).get_si());
    rows.push_back(row);
  }
  return {{"rows", rows}};
}

json index_set_json(const IndexSet& s) {
  json out = json::array();
  for (auto i : s) out.push_back(i + 1);
  return out;
}

json to_json(const RationalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json to_json(const Triangulation& t) {
  json cells = json::array();
  for (const auto& c : t.simplices) cells.push_back(index_set_json(c));
  return {{"simplices", cells}, {"weight", to_json(t.weight)}};
}

json to_json(const StandardPair& p) { return {{"root", p.root}, {"face", index_set_json(p.face)}}; }

json to_json(const std::vector<StandardPair>& pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back(to_json(p));
  return out;
}

json to_json(const AffineExponent& e) {
  json matrix = json::array();
  for (std::size_t j = 0; j < e.size(); ++j) {
    json row = json::array();
    for (std::size_t p = 0; p < e.parameters(); ++p) row.push_back(to_string(e.matrix(j, p)));
    matrix.push_back(row);
  }
  json params = json::array();
  for (std::size_t p = 0; p < e.parameters(); ++p) params.push_back("s" + std::to_string(e.first_parameter + p));
  json text = json::array();
  for (std::size_t j = 0; j < e.size(); ++j) text.push_back(e.coordinate_to_string(j));
  return {{"const", to_json(e.constant)}, {"matrix", matrix}, {"parameters", params}, {"text", text}};
}

json to_json(const CertifiedWeight& w) {
  json out;
  out["weight"] = to_json(w.weight.entries);
  if (w.weight.perturbation) {
    const auto& p = *w.weight.perturbation;
    out["base"] = to_json(p.base);
    out["direction"] = to_json(p.direction);
    out["epsilon"] = to_string(p.epsilon);
  }
  json gb = json::array();
  for (const auto& g : w.groebner_basis) gb.push_back(g.to_string());
  out["groebner_basis"] = gb;
  json gens = json::array();
  for (const auto& e : w.initial.generators()) gens.push_back(Polynomial::monomial(e).to_string());
  out["initial_ideal"] = gens;
  return out;
}

json to_json(const TruncatedSeriesFamily& f, bool with_terms) {
  json out;
  out["exponent"] = to_json(f.exponent);
  out["simplex"] = index_set_json(f.simplex());
  out["truncation"] = f.truncation;
  out["homogeneous"] = f.homogeneous;
  out["leading_monomial"] = f.leading_monomial();
  json offset = json::array();
  for (const auto& v : f.offset) offset.push_back(v.get_si());
  out["offset"] = offset;
  json lattice = json::array();
  const IntegerMatrix& h = f.lattice.hermite_basis();
  for (std::size_t i = 0; i < h.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < h.cols(); ++j) row.push_back(h(i, j).get_si());
    lattice.push_back(row);
  }
  out["lattice"] = lattice;
  if (with_terms) {
    json terms = json::array();
    for (const auto& k : f.support()) {
      AffineExponent g = f.exponent;
      for (std::size_t i = 0; i < f.kernel.size(); ++i) {
        const Integer step = k[i] - f.offset[i];
        for (std::size_t j = 0; j < g.size(); ++j) g.constant[j] += f.kernel.basis(j, i) * step;
      }
      json args = json::array();
      for (std::size_t j = 0; j < g.size(); ++j) {
        g.constant[j] += 1;
        args.push_back(g.coordinate_to_string(j));
      }
      json kp = json::array();
      for (const auto& v : k) kp.push_back(v.get_si());
      terms.push_back({{"kprime", kp}, {"gammaArgs", args}});
    }
    out["terms"] = terms;
  }
  return out;
}

json to_json(const SolutionBranch& b) {
  json pairs = json::array();
  for (std::size_t i = 0; i < b.pairs.size(); ++i)
    pairs.push_back({{"pair", to_json(b.pairs[i])}, {"leading_monomial", b.cosets[i].leading_monomial()}});
  json m = json::array();
  for (const auto& v : b.character.m) m.push_back(v.get_si());
  return {{"label", b.label()}, {"simplex", index_set_json(b.simplex)}, {"character", m}, {"cosets", pairs}};
}

json to_json(const VerificationReport& r) {
  json out;
  out["s"] = to_json(r.s);
  out["x"] = r.point.x;
  out["t"] = r.point.t;
  out["max_torus_coordinate"] = r.point.max_torus;
  out["region_ok"] = r.region_ok;
  out["truncations"] = {r.low, r.high};
  json branches = json::array();
  for (const auto& b : r.branches) {
    json shifts = json::array();
    for (const auto& s : b.shifts)
      shifts.push_back({{"j", s.column + 1}, {"low", s.low}, {"high", s.high}, {"norm", s.norm}, {"passed", s.passed}});
    branches.push_back({{"branch", b.branch + 1},
                        {"euler_exact", b.euler_exact},
                        {"abs_value", b.value_abs},
                        {"conditioning_warning", b.conditioning_warning},
                        {"shift_residuals", shifts}});
  }
  out["branches"] = branches;
  out["independence"] = {{"determinant", r.independence.determinant},
                         {"coset_determinant", r.independence.coset_determinant},
                         {"twist_determinant", r.independence.twist_determinant},
                         {"certified", r.independence.certified},
                         {"probes", r.independence.probes},
                         {"candidates", r.independence.candidates}};
  out["rank_matches_volume"] = r.rank_matches_volume;
  out["passed"] = r.passed();
  return out;
}

json to_json(const RelationReport& r, const std::vector<SolutionBranch>& branches) {
  json rows = json::array();
  for (const auto& x : r.residuals)
    rows.push_back({{"branch", branches.at(x.branch).label()}, {"row", x.row + 1}, {"residual", x.residual}});
  return {{"residuals", rows}, {"max_residual", r.max_residual}};
}

json to_json(const SolveResult& r) {
  json out;
  out["matrix"] = to_json(r.a)["rows"];
  out["homogenized"] = to_json(r.homogenized)["rows"];
  out["weight"] = to_json(r.weight);
  out["triangulation"] = to_json(r.triangulation);
  out["standard_pairs"] = to_json(r.pairs);
  json series = json::array();
  for (std::size_t i = 0; i < r.top_pairs.size(); ++i)
    series.push_back({{"pair", to_json(r.top_pairs[i])},
                      {"exponent", to_json(r.exponents[i])},
                      {"leading_monomial", r.series[i].leading_monomial()}});
  out["series"] = series;
  json branches = json::array();
  for (const auto& b : r.branches) branches.push_back(to_json(b));
  out["branches"] = branches;
  out["volume"] = r.volume.get_si();
  return out;
}

}  // namespace gkz
