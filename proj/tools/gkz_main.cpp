#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gkz/errors.hpp"
#include "gkz/groebner.hpp"
#include "gkz/io.hpp"
#include "gkz/pipeline.hpp"
#include "gkz/standard_pairs.hpp"

using namespace gkz;
using nlohmann::json;

namespace {

struct Options {
  std::string matrix;
  std::string relation;
  int truncation = 30;
  double radius = std::exp(-1.0);
  double tolerance = 1e-8;
  double margin = 1e-3;
  std::uint64_t seed = 20240607;
  std::string format = "json";
  std::string weight;
  std::string direction;
  std::string epsilon;
  std::string s;
  std::string x;
  int low = 20;
  int high = 40;
  bool terms = false;
  bool homogenized = false;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

RationalVector rational_list(const std::string& text, const std::string& what) {
  RationalVector out;
  for (const auto& item : split_list(text)) {
    auto v = try_parse_rational(item);
    if (!v) throw ValidationError("cli", "cannot read " + what + " entry '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<double> double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::istringstream in(item);
    double v;
    if (!(in >> v) || !in.eof()) throw ValidationError("cli", "cannot read " + what + " entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

PipelineConfig config_of(const Options& o) {
  PipelineConfig cfg;
  cfg.truncation = o.truncation;
  cfg.radius = o.radius;
  cfg.tolerance = o.tolerance;
  cfg.margin = o.margin;
  cfg.seed = o.seed;
  cfg.format = o.format;
  if (!o.weight.empty()) cfg.base_weight = rational_list(o.weight, "weight");
  if (!o.direction.empty()) cfg.perturbation.direction = rational_list(o.direction, "direction");
  if (!o.epsilon.empty()) cfg.perturbation.epsilon = parse_rational(o.epsilon);
  cfg.validate();
  return cfg;
}

IntegerPointConfig load(const Options& o) {
  IntegerPointConfig a = read_matrix_file(o.matrix);
  a.validate();
  return a;
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::string rows_text(const IntegerPointConfig& a) {
  std::ostringstream out;
  out << a.d() << " " << a.n() << "\n";
  for (std::size_t i = 0; i < a.d(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) out << (j ? " " : "") << a(i, j);
    out << "\n";
  }
  return out.str();
}

std::string polys_text(const std::vector<Polynomial>& ps) {
  std::string out;
  for (const auto& p : ps) out += p.to_string() + "\n";
  return out;
}

json polys_json(const std::vector<Polynomial>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

CertifiedWeight certified(const IntegerPointConfig& a, const PipelineConfig& cfg) {
  const RationalVector base = cfg.base_weight.value_or(default_base_weight(a.n()));
  if (base.size() != a.n() + 1) throw ValidationError("initial", "weight must have n + 1 entries");
  return perturbed_weight(homogenize(a), base, cfg.perturbation);
}

RationalVector chosen_s(const Options& o, const SolveResult& r, const PipelineConfig& cfg) {
  if (!o.s.empty()) {
    RationalVector s = rational_list(o.s, "s");
    if (s.size() != r.a.d()) throw ValidationError("cli", "--s needs " + std::to_string(r.a.d()) + " entries");
    return s;
  }
  std::vector<std::vector<int>> shifts;
  for (std::size_t j = 0; j < r.a.n(); ++j) {
    std::vector<int> sigma(r.a.d());
    for (std::size_t i = 0; i < r.a.d(); ++i) sigma[i] = -static_cast<int>(r.a(i, j).get_si());
    shifts.push_back(sigma);
  }
  std::mt19937_64 rng(cfg.seed);
  return sample_generic_s(r.branches, r.a.d(), rng, shifts, cfg.margin);
}

std::vector<double> chosen_x(const Options& o, const SolveResult& r) {
  if (!o.x.empty()) {
    std::vector<double> x = double_list(o.x, "x");
    if (x.size() != r.a.n()) throw ValidationError("cli", "--x needs " + std::to_string(r.a.n()) + " entries");
    return x;
  }
  return choose_evaluation_point(r.a, r.weight.weight.entries, r.triangulation.simplices).x;
}

std::string vector_text(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

int cmd_volume(const Options& o) {
  const auto a = load(o);
  const Integer v = normalized_volume(a);
  emit(o, {{"volume", v.get_si()}}, to_string(v) + "\n");
  return 0;
}

int cmd_homogenize(const Options& o) {
  const auto h = homogenize(load(o));
  emit(o, to_json(h), rows_text(h));
  return 0;
}

int cmd_toric(const Options& o) {
  auto a = load(o);
  if (o.homogenized) a = homogenize(a);
  const auto gens = toric_ideal(a);
  emit(o, {{"generators", polys_json(gens)}}, polys_text(gens));
  return 0;
}

int cmd_initial(const Options& o) {
  const auto a = load(o);
  const CertifiedWeight w = certified(a, config_of(o));
  std::string text = "weight " + vector_text(w.weight.entries) + "\n";
  for (const auto& e : w.initial.generators()) text += Polynomial::monomial(e).to_string() + "\n";
  emit(o, to_json(w), text);
  return 0;
}

int cmd_triangulate(const Options& o) {
  const auto a = load(o);
  const CertifiedWeight w = certified(a, config_of(o));
  const Triangulation t = regular_triangulation(homogenize(a), w.weight.entries);
  std::string text;
  for (const auto& c : t.simplices) text += to_string(c) + " " + to_string(simplex_volume(homogenize(a), c)) + "\n";
  emit(o, to_json(t), text);
  return 0;
}

int cmd_standard_pairs(const Options& o) {
  const auto a = load(o);
  const CertifiedWeight w = certified(a, config_of(o));
  const auto pairs = standard_pairs(w.initial);
  std::string text;
  for (const auto& p : pairs) text += to_string(p) + "\n";
  emit(o, to_json(pairs), text);
  return 0;
}

int cmd_exponents(const Options& o) {
  const auto a = load(o);
  const SolveResult r = solve(a, config_of(o));
  json j = json::array();
  std::string text;
  for (std::size_t i = 0; i < r.top_pairs.size(); ++i) {
    j.push_back({{"pair", to_json(r.top_pairs[i])},
                 {"exponent", to_json(r.exponents[i])},
                 {"series", to_json(r.series[i], o.terms)}});
    text += to_string(r.top_pairs[i]) + "  " + r.series[i].leading_monomial() + "\n";
  }
  emit(o, j, text);
  return 0;
}

int cmd_solve(const Options& o) {
  const auto a = load(o);
  const PipelineConfig cfg = config_of(o);
  const SolveResult r = solve(a, cfg);
  const VerificationReport rep =
      o.s.empty() ? verify(r, cfg, std::nullopt, o.low, o.high) : verify(r, cfg, chosen_s(o, r, cfg), std::nullopt, o.low, o.high);
  json j = to_json(r);
  j["verification"] = to_json(rep);
  std::ostringstream text;
  text << "volume " << r.volume << "\n";
  for (const auto& b : r.branches) {
    text << b.label() << ":";
    for (const auto& c : b.cosets) text << " " << c.leading_monomial();
    text << "\n";
  }
  text << "s = " << vector_text(rep.s) << "\n";
  text << "region " << (rep.region_ok ? "ok" : "FAILED") << ", euler " << (rep.euler_ok() ? "exact" : "FAILED")
       << ", shifts " << (rep.shifts_ok() ? "ok" : "FAILED") << ", independence det " << rep.independence.determinant
       << (rep.independence.certified ? "" : " (not certified)") << "\n";
  text << (rep.passed() ? "verified\n" : "verification FAILED\n");
  emit(o, j, text.str());
  if (!rep.passed()) {
    std::cerr << "gkz: verify: verification failed\n";
    return static_cast<int>(ExitCode::kNumericTolerance);
  }
  return 0;
}

int cmd_eval(const Options& o) {
  const auto a = load(o);
  const PipelineConfig cfg = config_of(o);
  const SolveResult r = solve(a, cfg);
  const RationalVector s = chosen_s(o, r, cfg);
  const std::vector<double> x = chosen_x(o, r);
  json rows = json::array();
  std::ostringstream text;
  text.precision(17);
  for (const auto& b : r.branches) {
    const Evaluation ev = b.evaluate(s, x, cfg.truncation, cfg.margin);
    rows.push_back({{"branch", b.label()},
                    {"re", ev.value.real()},
                    {"im", ev.value.imag()},
                    {"terms", ev.terms},
                    {"conditioning_warning", ev.conditioning_warning}});
    text << b.label() << "  " << ev.value.real() << (ev.value.imag() < 0 ? " - " : " + ")
         << std::abs(ev.value.imag()) << "i" << (ev.conditioning_warning ? "  (near a pole)" : "") << "\n";
  }
  emit(o, {{"s", to_json(s)}, {"x", x}, {"truncation", cfg.truncation}, {"values", rows}}, text.str());
  return 0;
}

int cmd_rank(const Options& o) {
  const auto a = load(o);
  const PipelineConfig cfg = config_of(o);
  const std::size_t rank = rank_by_count(a, cfg.base_weight);
  const Integer vol = normalized_volume(a);
  const bool equal = Integer(rank) == vol;
  emit(o, {{"rank", rank}, {"volume", vol.get_si()}, {"equal", equal}},
       std::to_string(rank) + (equal ? " = " : " != ") + to_string(vol) + "\n");
  if (!equal) {
    std::cerr << "gkz: rank: standard pair count " << rank << " differs from the volume " << vol << "\n";
    return static_cast<int>(ExitCode::kCertification);
  }
  return 0;
}

int cmd_check_relation(const Options& o) {
  const auto a = load(o);
  const PipelineConfig cfg = config_of(o);
  const Relation rel = parse_relation(read_file(o.relation), OperatorSpace{a.d(), a.n()});
  const SolveResult r = solve(a, cfg);
  const RationalVector s = chosen_s(o, r, cfg);
  const std::vector<double> x = chosen_x(o, r);
  const RelationReport rep = check_relation(rel, r.branches, s, x, cfg.truncation, cfg.margin);
  json j = to_json(rep, r.branches);
  j["s"] = to_json(s);
  j["x"] = x;
  j["tolerance"] = cfg.tolerance;
  j["passed"] = rep.passed(cfg.tolerance);
  std::ostringstream text;
  for (const auto& res : rep.residuals)
    text << r.branches[res.branch].label() << " row " << res.row + 1 << "  " << res.residual << "\n";
  text << (rep.passed(cfg.tolerance) ? "pass" : "FAIL") << " (max " << rep.max_residual << ")\n";
  emit(o, j, text.str());
  if (!rep.passed(cfg.tolerance)) {
    std::cerr << "gkz: check-relation: max residual " << rep.max_residual << " exceeds " << cfg.tolerance << "\n";
    return static_cast<int>(ExitCode::kNumericTolerance);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series solutions of A-hypergeometric differential-difference systems"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool numeric) {
    sub->add_option("matrix", o.matrix, "Matrix file (text or JSON)")->required();
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--weight", o.weight, "Base weight on the homogenized matrix, comma separated (n + 1 entries)");
    sub->add_option("--direction", o.direction, "Tiebreak direction for the weight perturbation");
    sub->add_option("--epsilon", o.epsilon, "Perturbation size, a rational");
    if (numeric) {
      sub->add_option("--truncation", o.truncation, "Truncation order N");
      sub->add_option("--radius", o.radius, "Convergence radius r in (0, 1)");
      sub->add_option("--tolerance", o.tolerance, "Residual tolerance");
      sub->add_option("--margin", o.margin, "Genericity margin");
      sub->add_option("--seed", o.seed, "Seed for sampling s");
      sub->add_option("--s", o.s, "Parameter s, comma separated rationals (default: sampled)");
    }
  };

  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
  auto add = [&](const char* name, const char* help, bool numeric, int (*fn)(const Options&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub, numeric);
    commands.emplace_back(sub, fn);
    return sub;
  };
  add("volume", "Normalized volume of A", false, cmd_volume);
  add("homogenize", "The homogenized matrix", false, cmd_homogenize);
  add("toric", "Generators of the toric ideal", false, cmd_toric)
      ->add_flag("--homogenized", o.homogenized, "Use the homogenized matrix");
  add("initial", "Certified weight and initial ideal of the homogenized toric ideal", false, cmd_initial);
  add("triangulate", "Regular triangulation of the homogenized matrix", false, cmd_triangulate);
  add("standard-pairs", "Standard pairs of the initial ideal", false, cmd_standard_pairs);
  add("exponents", "Admissible exponents and series of the top-dimensional pairs", true, cmd_exponents)
      ->add_flag("--terms", o.terms, "List the series terms");
  CLI::App* solve_cmd = add("solve", "Solution branches with a verification report", true, cmd_solve);
  solve_cmd->add_option("--low", o.low, "Low truncation for the shift residuals");
  solve_cmd->add_option("--high", o.high, "High truncation for the shift residuals");
  add("eval", "Evaluate every branch at (s, x)", true, cmd_eval)
      ->add_option("--x", o.x, "Point x, comma separated (default: the chosen evaluation point)");
  add("rank", "Standard pair count against the volume", false, cmd_rank);
  CLI::App* rel = add("check-relation", "Check a relation file on every branch", true, cmd_check_relation);
  rel->add_option("relation", o.relation, "Relation file")->required();
  rel->add_option("--x", o.x, "Point x, comma separated (default: the chosen evaluation point)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::kValidation);
  }
  try {
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(o);
  } catch (const Error& e) {
    std::cerr << "gkz: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  }
  return 0;
}
