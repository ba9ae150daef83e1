#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anisotetra/acceptance.hpp"
#include "anisotetra/error.hpp"
#include "anisotetra/expression.hpp"
#include "anisotetra/lattice.hpp"
#include "anisotetra/quad.hpp"
#include "anisotetra/report.hpp"
#include "anisotetra/verify.hpp"

using namespace anisotetra;

namespace {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitNumerical = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateTetrahedron:
      return kExitDegenerate;
    case ErrorKind::IllConditionedBasis:
    case ErrorKind::GenerationFailure:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double x = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw Error(ErrorKind::ParseError, what + ": '" + s + "' is not a finite number");
  return x;
}

Tetrahedron parse_vertices(const std::string& text) {
  const auto groups = split(text, " \t\n;");
  if (groups.size() != 4) {
    std::ostringstream os;
    os << "vertices: expected 4 points \"x,y,z x,y,z x,y,z x,y,z\", got " << groups.size();
    if (groups.size() < 4) os << " (missing vertex " << groups.size() + 1 << ")";
    throw Error(ErrorKind::ParseError, os.str());
  }
  Tetrahedron t;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = split(groups[i], ",");
    const std::string field = "vertices: vertex " + std::to_string(i + 1);
    if (c.size() != 3)
      throw Error(ErrorKind::ParseError, field + " needs 3 coordinates, got " + std::to_string(c.size()));
    for (int j = 0; j < 3; ++j) t.v[i][j] = parse_double(c[static_cast<std::size_t>(j)], field);
  }
  return t;
}

Tetrahedron read_tetra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "tetra: cannot open '" + path + "'");
  Tetrahedron t;
  std::size_t count = 0;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto c = split(line, " \t\r,");
    if (c.empty()) continue;
    const std::string where = "tetra: " + path + ":" + std::to_string(lineno);
    if (c.size() != 3)
      throw Error(ErrorKind::ParseError, where + ": expected 'x y z', got " + std::to_string(c.size()) + " values");
    if (count == 4) throw Error(ErrorKind::ParseError, where + ": more than 4 vertices");
    for (int j = 0; j < 3; ++j) t.v[count][j] = parse_double(c[static_cast<std::size_t>(j)], where);
    ++count;
  }
  if (count != 4)
    throw Error(ErrorKind::ParseError, "tetra: " + path + " has " + std::to_string(count) +
                                           " vertices (missing vertex " + std::to_string(count + 1) + ")");
  return t;
}

struct TetraSource {
  std::string vertices;
  std::string tetra;

  void add(CLI::App* cmd) {
    cmd->add_option("--vertices", vertices, "Four points, e.g. \"0,0,0 1,0,0 0,1,0 0,0,1\"");
    cmd->add_option("--tetra", tetra, "File with four 'x y z' lines, or ref | tilde | regular");
  }

  Tetrahedron load() const {
    if (!vertices.empty() && !tetra.empty())
      throw Error(ErrorKind::ParseError, "vertices: give either --vertices or --tetra, not both");
    if (!vertices.empty()) return parse_vertices(vertices);
    if (tetra.empty()) throw Error(ErrorKind::ParseError, "vertices: missing (use --vertices or --tetra)");
    if (tetra == "ref" || tetra == "hat") return Tetrahedron::reference_hat();
    if (tetra == "tilde") return Tetrahedron::reference_tilde();
    if (tetra == "regular") return Tetrahedron::regular();
    return read_tetra_file(tetra);
  }

  void echo(Json& config) const {
    if (!vertices.empty()) config["vertices"] = vertices;
    if (!tetra.empty()) config["tetra"] = tetra;
  }
};

// Applies a JSON config file to options not given on the command line.
void apply_config(const std::string& path, CLI::App& app, CLI::App* cmd) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "config: cannot open '" + path + "'");
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorKind::ParseError, "config: top level must be an object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") throw Error(ErrorKind::ParseError, "config: key 'config' is not allowed");
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt) throw Error(ErrorKind::ParseError, "config: unknown key '" + key + "' for " + cmd->get_name());
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else if (value.is_boolean())
      text = value.get<bool>() ? "true" : "false";
    else if (value.is_number_float())
      text = format_number(value.get<double>());
    else if (value.is_number())
      text = value.dump();
    else
      throw Error(ErrorKind::ParseError, "config: value for '" + key + "' must be a string, number or bool");
    opt->add_result(text);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw Error(ErrorKind::ParseError, "config: " + key + ": " + e.what());
    }
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "out: cannot write '" + path + "'");
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void collect_warnings(const ErrorRatioResult& r, const std::string& where, Json& warnings) {
  const std::string prefix = where.empty() ? "" : where + ": ";
  if (r.refinement_warning)
    warnings.push_back(prefix + "quadrature refinement check disagreed by more than 1e-6");
  if (r.approximate) warnings.push_back(prefix + "sup norm estimated by lattice sampling");
  if (r.indeterminate) warnings.push_back(prefix + "ratio indeterminate: |v|_{k+1,p} vanishes");
}

// ---------------------------------------------------------------------------

struct Global {
  std::string out = "-";
  std::string config;
  unsigned threads = 0;
};

struct AnalyzeCmd {
  TetraSource src;
  double gamma_max = std::numbers::pi / 2;

  int run(const Global& g, Json config) const {
    const Tetrahedron t = src.load();
    const GeometryReport geo = angles(t);
    const StandardPosition sp = standard_position(t);
    const TransformMatrices m = matrices(sp);
    validate_gamma_max(gamma_max);
    const MacConstants mc = mac_bound_constants(gamma_max);
    Json results{{"tetrahedron", to_json(t)},
                 {"geometry", to_json(geo)},
                 {"classification", to_json(classify(t))},
                 {"standard_position", to_json(sp)},
                 {"matrices", to_json(m)},
                 {"R_T", geo.R_T},
                 {"H_T", geo.H_T},
                 {"R_over_h", geo.R_T / geo.h_T()},
                 {"H_over_h", geo.H_T / geo.h_T()},
                 {"mac", {{"gamma_max", gamma_max},
                          {"satisfied", mac_check(geo, gamma_max)},
                          {"max_angle", geo.max_angle},
                          {"constants", to_json(mc)}}}};
    write_output(g.out, dump(make_report("analyze", config, results, Json::array(), 0)));
    return kExitOk;
  }

  Json echo() const {
    Json c;
    src.echo(c);
    c["gamma-max"] = gamma_max;
    return c;
  }
};

struct ErrorCmd {
  TetraSource src;
  std::string expr;
  std::string field;
  int k = 1, m = 0;
  std::string p = "2";
  int quad_degree = 0;
  int sup_lattice = 40;
  bool unweighted = false;
  std::uint64_t seed = 20240607;

  ScalarField select(const Tetrahedron& t) const {
    if (!expr.empty() && !field.empty())
      throw Error(ErrorKind::ParseError, "field: give either --expr or --field, not both");
    if (!expr.empty()) return expression_field(Expression::parse(expr), expr);
    if (field.empty()) throw Error(ErrorKind::ParseError, "field: missing (use --expr or --field)");
    const auto corpus = field_corpus(k, t, seed);
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (corpus[i].name() == field || std::to_string(i) == field) return corpus[i];
    std::string names;
    for (std::size_t i = 0; i < corpus.size(); ++i) names += "\n  " + std::to_string(i) + ": " + corpus[i].name();
    throw Error(ErrorKind::ParseError, "field: unknown corpus field '" + field + "'; available:" + names);
  }

  int run(const Global& g, Json config) const {
    const double pv = parse_p(p);
    if (const Admissibility a = validate_p(k, m, pv); !a.admissible)
      throw Error(ErrorKind::InadmissiblePC, a.reason);
    const Tetrahedron t = src.load();
    const ScalarField v = select(t);
    ErrorOptions opts;
    opts.quad_degree = quad_degree;
    opts.sup_lattice = sup_lattice;
    opts.weighted = !unweighted;
    const ErrorRatioResult r = error_ratio(v, t, k, m, pv, opts);
    Json warnings = Json::array();
    collect_warnings(r, "", warnings);
    Json results = to_json(r);
    results["field"] = v.name();
    write_output(g.out, dump(make_report("error", config, results, warnings, seed)));
    return kExitOk;
  }

  Json echo() const {
    Json c;
    src.echo(c);
    if (!expr.empty()) c["expr"] = expr;
    if (!field.empty()) c["field"] = field;
    c["k"] = k;
    c["m"] = m;
    c["p"] = p;
    c["quad-degree"] = quad_degree;
    c["sup-lattice"] = sup_lattice;
    c["unweighted"] = unweighted;
    c["seed"] = seed;
    return c;
  }
};

struct SweepCmd {
  int k = 1, m = 0;
  std::string p = "2";
  std::string alphas = "1,eps,eps";
  int eps_levels = 11;
  int type = 1;
  std::uint64_t seed = 20240607;
  std::string format = "csv";
  std::string summary;
  int quad_degree = 0;
  int sup_lattice = 40;

  int run(const Global& g, Json config) const {
    const double pv = parse_p(p);
    if (const Admissibility a = validate_p(k, m, pv); !a.admissible)
      throw Error(ErrorKind::InadmissiblePC, a.reason);
    if (eps_levels < 1) throw Error(ErrorKind::ParseError, "eps-levels: must be >= 1");
    ErrorOptions opts;
    opts.quad_degree = quad_degree;
    opts.sup_lattice = sup_lattice;
    const SweepResult s = squeeze_sweep(k, m, pv, parse_alpha_pattern(alphas), eps_levels,
                                        type == 1 ? TetraType::Type1 : TetraType::Type2, seed, opts);
    Json warnings = Json::array();
    for (const auto& row : s.rows) {
      const std::string where = "level " + std::to_string(row.level);
      if (row.refinement_warning) warnings.push_back(where + ": quadrature refinement check disagreed");
      if (row.indeterminate)
        warnings.push_back(where + ": " + std::to_string(row.indeterminate) + " indeterminate ratios skipped");
    }
    const Json report = make_report("sweep", config, to_json(s), warnings, seed);
    if (format == "csv") {
      write_output(g.out, sweep_csv(s));
      if (!summary.empty()) write_output(summary, dump(report));
    } else {
      write_output(g.out, dump(report));
    }
    return kExitOk;
  }

  Json echo() const {
    return {{"k", k},
            {"m", m},
            {"p", p},
            {"alphas", alphas},
            {"eps-levels", eps_levels},
            {"type", type},
            {"seed", seed},
            {"format", format},
            {"quad-degree", quad_degree},
            {"sup-lattice", sup_lattice}};
  }
};

struct MacCmd {
  double gamma_max = std::numbers::pi / 2;
  std::size_t n = 10000;
  std::uint64_t seed = 7;

  int run(const Global& g, Json config) const {
    validate_gamma_max(gamma_max);
    const MacReport r = mac_experiment(n, gamma_max, seed);
    Json warnings = Json::array();
    if (r.forward.generation_failed) warnings.push_back("forward: " + r.forward.failure);
    if (r.reverse.generation_failed) warnings.push_back("reverse: " + r.reverse.failure);
    Json results = to_json(r);
    results["passed"] = r.passed();
    write_output(g.out, dump(make_report("mac", config, results, warnings, seed)));
    if (r.forward.generation_failed || r.reverse.generation_failed) return kExitNumerical;
    return r.passed() ? kExitOk : kExitCheckFailed;
  }

  Json echo() const { return {{"gamma-max", gamma_max}, {"n", n}, {"seed", seed}}; }
};

struct DqCmd {
  int k = 4;
  std::string delta = "2,1,1";
  std::string format = "json";
  std::uint64_t seed = 20240607;

  int run(const Global& g, Json config) const {
    const auto parts = split(delta, ", ");
    if (parts.size() != 3) throw Error(ErrorKind::ParseError, "delta: expected three integers, e.g. 2,1,1");
    MultiIndex3 d{};
    for (int i = 0; i < 3; ++i) {
      const std::string& s = parts[static_cast<std::size_t>(i)];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d[i]);
      if (ec != std::errc() || ptr != s.data() + s.size() || d[i] < 0)
        throw Error(ErrorKind::ParseError, "delta: '" + s + "' is not a non-negative integer");
    }
    if (d.order() < 1 || d.order() > k)
      throw Error(ErrorKind::InvalidDegree, "delta: need 1 <= |delta| <= k = " + std::to_string(k));

    const auto stencil = difference_stencil(d);
    const bool expansion = d == MultiIndex3{{2, 1, 1}};
    const double factor = std::pow(static_cast<double>(k), d.order()) / static_cast<double>(d.factorial());

    Json terms = Json::array();
    for (const auto& term : stencil)
      terms.push_back({{"eta", {term.eta[0], term.eta[1], term.eta[2]}}, {"coeff", term.coeff}});

    Json refs = Json::array();
    bool all_ok = true;
    for (Reference ref : {Reference::Hat, Reference::Tilde}) {
      const Tetrahedron t =
          ref == Reference::Hat ? Tetrahedron::reference_hat() : Tetrahedron::reference_tilde();
      const auto boxes = enumerate_boxes(k, d, ref);
      const BoxConditionRank rank = box_condition_rank(k, d, ref);
      double worst = 0;
      std::size_t count = 0;
      Json per_field = Json::array();
      for (const auto& f : field_corpus(k, t, seed)) {
        const ResidualQuotients q = residual_quotients_vanish(f, t, k, ref);
        const double rel = q.max_abs / std::max(1.0, q.scale);
        worst = std::max(worst, rel);
        count += q.quotients;
        per_field.push_back({{"field", f.name()}, {"max_abs", number(q.max_abs)}, {"relative", number(rel)}});
      }
      const bool counts_ok = boxes.size() == dim_p(k - d.order());
      all_ok = all_ok && counts_ok && worst < 1e-9;
      refs.push_back({{"reference", to_string(ref)},
                      {"boxes", boxes.size()},
                      {"expected_boxes", dim_p(k - d.order())},
                      {"box_rank", rank.rank},
                      {"residual_quotients", count},
                      {"max_relative_quotient", number(worst)},
                      {"fields", per_field}});
    }

    Json results{{"k", k},
                 {"delta", {d[0], d[1], d[2]}},
                 {"factor", factor},
                 {"terms", terms},
                 {"reference_expansion", expansion ? Json(matches_reference_expansion(stencil)) : Json(nullptr)},
                 {"references", refs}};
    if (expansion) all_ok = all_ok && matches_reference_expansion(stencil);

    if (format == "text") {
      std::ostringstream os;
      os << "f^" << k << "[x_0, Delta^(" << d[0] << "," << d[1] << "," << d[2] << ") x_0] = "
         << format_number(factor) << " * sum\n";
      os << "  eta        coeff\n";
      for (const auto& term : stencil) {
        char line[64];
        std::snprintf(line, sizeof line, "  (%d,%d,%d)  %+lld\n", term.eta[0], term.eta[1], term.eta[2],
                      static_cast<long long>(term.coeff));
        os << line;
      }
      if (expansion) os << "reference expansion: " << (matches_reference_expansion(stencil) ? "match" : "MISMATCH") << "\n";
      for (const auto& r : refs)
        os << r["reference"].get<std::string>() << ": " << r["boxes"] << " boxes (expected "
           << r["expected_boxes"] << "), max relative residual quotient "
           << format_number(r["max_relative_quotient"].get<double>()) << " over " << r["residual_quotients"]
           << " quotients\n";
      write_output(g.out, os.str());
    } else {
      write_output(g.out, dump(make_report("dq", config, results, Json::array(), seed)));
    }
    return all_ok ? kExitOk : kExitCheckFailed;
  }

  Json echo() const { return {{"k", k}, {"delta", delta}, {"format", format}, {"seed", seed}}; }
};

struct SelftestCmd {
  double scale = 1.0;
  std::uint64_t seed = 7;
  std::vector<int> criteria;

  int run(const Global& g, const Json&) const {
    AcceptanceOptions opts;
    opts.seed = seed;
    opts.scale = scale;
    std::ostringstream os;
    int failed = 0;
    auto report = [&](const CriterionResult& r) {
      const std::string line = format_result(r) + "\n";
      if (g.out == "-") {
        std::cout << line;
        std::cout.flush();
      } else {
        os << line;
      }
      failed += !r.passed;
    };
    if (criteria.empty()) {
      run_acceptance(opts, report);
    } else {
      for (int id : criteria) report(run_criterion(id, opts));
    }
    if (g.out != "-") write_output(g.out, os.str());
    return failed ? kExitCheckFailed : kExitOk;
  }

  Json echo() const { return {{"scale", scale}, {"seed", seed}, {"criteria", criteria}}; }
};

template <class T>
CLI::Option* seed_option(CLI::App* cmd, T& seed) {
  return cmd->add_option("--seed", seed, "Random seed")->envname("ANISOTETRA_SEED")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic interpolation error bounds on tetrahedra"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Global g;
  app.add_option("--out", g.out, "Output path; - for standard output")->capture_default_str();
  app.add_option("--config", g.config, "JSON file with option values; flags override it");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");

  AnalyzeCmd analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Geometry report for one tetrahedron");
  c_analyze->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  analyze.src.add(c_analyze);
  c_analyze->add_option("--gamma-max", analyze.gamma_max, "MAC threshold in radians")->capture_default_str();

  ErrorCmd error;
  auto* c_error = app.add_subcommand("error", "Interpolation error against the anisotropic bound");
  c_error->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  error.src.add(c_error);
  c_error->add_option("--expr", error.expr, "Field as an expression in x, y, z");
  c_error->add_option("--field", error.field, "Corpus field by name or index");
  c_error->add_option("--k", error.k, "Interpolation degree")->capture_default_str();
  c_error->add_option("--m", error.m, "Seminorm order of the error")->capture_default_str();
  c_error->add_option("--p", error.p, "Exponent; inf allowed")->capture_default_str();
  c_error->add_option("--quad-degree", error.quad_degree, "Quadrature degree (0 = automatic)");
  c_error->add_option("--sup-lattice", error.sup_lattice, "Sampling lattice for p = inf")->capture_default_str();
  c_error->add_flag("--unweighted", error.unweighted, "Drop multinomial weights in the seminorm");
  seed_option(c_error, error.seed);

  SweepCmd sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Squeeze sweep over the field corpus");
  c_sweep->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_sweep->add_option("--k", sweep.k)->capture_default_str();
  c_sweep->add_option("--m", sweep.m)->capture_default_str();
  c_sweep->add_option("--p", sweep.p)->capture_default_str();
  c_sweep->add_option("--alphas", sweep.alphas, "Scaling pattern; eps becomes 2^-level")->capture_default_str();
  c_sweep->add_option("--eps-levels", sweep.eps_levels, "Number of levels")->capture_default_str();
  c_sweep->add_option("--type", sweep.type, "Reference tetrahedron type")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  seed_option(c_sweep, sweep.seed);
  c_sweep->add_option("--format", sweep.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  c_sweep->add_option("--summary", sweep.summary, "Also write the JSON report here (csv format)");
  c_sweep->add_option("--quad-degree", sweep.quad_degree, "Quadrature degree (0 = automatic)");
  c_sweep->add_option("--sup-lattice", sweep.sup_lattice)->capture_default_str();

  MacCmd mac;
  auto* c_mac = app.add_subcommand("mac", "Maximum angle condition against R_T / h_T");
  c_mac->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_mac->add_option("--gamma-max", mac.gamma_max)->capture_default_str();
  c_mac->add_option("--n", mac.n, "Samples per direction")->capture_default_str();
  seed_option(c_mac, mac.seed);

  DqCmd dq;
  auto* c_dq = app.add_subcommand("dq", "Difference-quotient stencil and residual checks");
  c_dq->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_dq->add_option("--k", dq.k)->capture_default_str();
  c_dq->add_option("--delta", dq.delta, "Multi-index, e.g. 2,1,1")->capture_default_str();
  c_dq->add_option("--format", dq.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  seed_option(c_dq, dq.seed);

  SelftestCmd selftest;
  auto* c_selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  c_selftest->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  c_selftest->add_option("--scale", selftest.scale, "Sample-count multiplier")->capture_default_str();
  seed_option(c_selftest, selftest.seed);
  c_selftest->add_option("--criteria", selftest.criteria, "Subset of criteria 1..10")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',')
      ->check(CLI::Range(1, kCriteria));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!g.config.empty()) apply_config(g.config, app, cmd);
    set_worker_threads(g.threads);
    const std::string name = cmd->get_name();
    if (name == "analyze") return analyze.run(g, analyze.echo());
    if (name == "error") return error.run(g, error.echo());
    if (name == "sweep") return sweep.run(g, sweep.echo());
    if (name == "mac") return mac.run(g, mac.echo());
    if (name == "dq") return dq.run(g, dq.echo());
    return selftest.run(g, selftest.echo());
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
