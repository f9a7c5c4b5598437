#include "folcc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "folcc/error.hpp"

namespace folcc {

using report::Json;

namespace {

struct Builtin {
  const char* name;
  const char* text;
};

// Generated from scenarios/*.yaml at configure time.
const Builtin kBuiltins[] = {
#include "builtin_scenarios.inc"
};

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.line < 0) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

std::string str(const YAML::Node& n, const std::string& key) {
  const YAML::Node v = n[key];
  if (!v || !v.IsScalar()) throw ConfigError("missing string field '" + key + "'" + where(n));
  return v.as<std::string>();
}

std::string str_or(const YAML::Node& n, const std::string& key, const std::string& fallback) {
  const YAML::Node v = n[key];
  return v && v.IsScalar() ? v.as<std::string>() : fallback;
}

double num_or(const YAML::Node& n, const std::string& key, double fallback) {
  const YAML::Node v = n[key];
  return v ? parse_number(v) : fallback;
}

long int_or(const YAML::Node& n, const std::string& key, long fallback) {
  const double v = num_or(n, key, static_cast<double>(fallback));
  if (v != std::floor(v)) throw ConfigError("field '" + key + "' must be an integer" + where(n));
  return static_cast<long>(v);
}

ExprAst expr_field(const YAML::Node& n, const std::string& key) {
  const std::string text = str(n, key);
  try {
    return ExprAst::parse(text);
  } catch (const ParseError& e) {
    throw ConfigError("field '" + key + "': " + e.what() + where(n));
  }
}

LocalDiffeo map_field(const YAML::Node& n, const std::string& key) {
  const std::string text = str(n, key);
  try {
    return LocalDiffeo::parse(text);
  } catch (const Error& e) {
    throw ConfigError("field '" + key + "' ('" + text + "'): " + e.what() + where(n));
  }
}

std::vector<double> list_or(const YAML::Node& n, const std::string& key, std::vector<double> fallback) {
  const YAML::Node v = n[key];
  if (!v) return fallback;
  if (!v.IsSequence()) throw ConfigError("field '" + key + "' must be a list" + where(n));
  std::vector<double> out;
  for (const auto& e : v) out.push_back(parse_number(e));
  return out;
}

double tol_of(const CheckSpec& c, const RunOptions& o, double fallback) {
  if (o.tol_override > 0) return o.tol_override;
  return num_or(c.params, "tol", fallback);
}

// Expression-valued fields are parsed once here so that bad configs fail
// before anything runs.
void validate_check(const CheckSpec& c) {
  const YAML::Node& p = c.params;
  const std::string& k = c.kind;
  if (k == "connection") {
    const std::string kind = str_or(p, "connection", "affine");
    if (kind != "affine" && kind != "projective") throw ConfigError("connection must be affine or projective" + where(p));
    if (p["from_conjugacy"]) {
      map_field(p, "from_conjugacy");
    } else {
      const YAML::Node cand = p["candidate"];
      if (!cand || !cand.IsMap()) throw ConfigError("connection check needs 'candidate' or 'from_conjugacy'" + where(p));
      for (const auto& kv : cand) {
        try {
          ExprAst::parse(kv.second.as<std::string>());
        } catch (const ParseError& e) {
          throw ConfigError("candidate for chart '" + kv.first.as<std::string>() + "': " + e.what() + where(p));
        }
      }
    }
  } else if (k == "reeb-probe") {
    expr_field(p, "profile");
  } else if (k == "rotation") {
    map_field(p, "map");
    if (p["expected"]) expr_field(p, "expected");
  } else if (k == "conjugacy") {
    map_field(p, "map");
    map_field(p, "conjugacy");
    expr_field(p, "alpha");
  } else if (k == "diophantine") {
    expr_field(p, "alpha");
  } else if (k == "fixed-points") {
    map_field(p, "map");
  } else if (k == "szekeres") {
    expr_field(p, "field");
  } else if (k == "flow") {
    expr_field(p, "field");
    map_field(p, "map");
  }
}

}  // namespace

const std::vector<std::string>& check_kinds() {
  static const std::vector<std::string> kinds{"identities", "invariance", "connection", "reeb-probe",  "rotation",
                                              "conjugacy",  "diophantine", "fixed-points", "szekeres", "flow"};
  return kinds;
}

double parse_number(const YAML::Node& node) {
  if (!node || !node.IsScalar()) throw ConfigError("expected a number" + where(node));
  std::string s = node.as<std::string>();
  if (s == "inf" || s == "+inf" || s == ".inf") return HUGE_VAL;
  if (s == "-inf" || s == "-.inf") return -HUGE_VAL;
  try {
    return ExprAst::parse(s).eval(0.0);
  } catch (const Error& e) {
    throw ConfigError("not a number: '" + s + "'" + where(node));
  }
}

Interval parse_interval(const YAML::Node& node) {
  if (!node || !node.IsSequence() || node.size() != 2) throw ConfigError("interval must be [lo, hi]" + where(node));
  Interval iv{parse_number(node[0]), parse_number(node[1])};
  if (!(iv.lo < iv.hi)) throw ConfigError("interval needs lo < hi" + where(node));
  return iv;
}

ScenarioConfig parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("scenario must be a YAML mapping");
  ScenarioConfig cfg;
  cfg.name = str(root, "name");
  cfg.description = str_or(root, "description", "");
  cfg.seed = static_cast<unsigned long>(int_or(root, "seed", 1));
  cfg.output = str_or(root, "output", "");

  const YAML::Node pres = root["presentation"];
  if (!pres || !pres.IsMap()) throw ConfigError("missing 'presentation'");
  cfg.presentation.name = cfg.name;
  cfg.presentation.description = cfg.description;
  const YAML::Node charts = pres["charts"];
  if (!charts || !charts.IsSequence() || charts.size() == 0) throw ConfigError("presentation needs at least one chart");
  for (const auto& c : charts) cfg.presentation.charts.push_back({str(c, "name"), parse_interval(c["interval"])});
  const YAML::Node gens = pres["generators"];
  if (gens) {
    if (!gens.IsSequence()) throw ConfigError("'generators' must be a list");
    for (const auto& g : gens) {
      Generator gen;
      gen.name = str(g, "name");
      gen.map = map_field(g, "map");
      gen.source_chart = str(g, "source");
      gen.target_chart = str_or(g, "target", gen.source_chart);
      cfg.presentation.chart(gen.source_chart);
      cfg.presentation.chart(gen.target_chart);
      if (g["sample"]) gen.sample = parse_interval(g["sample"]);
      cfg.presentation.generators.push_back(std::move(gen));
    }
  }

  const YAML::Node checks = root["checks"];
  if (!checks || !checks.IsSequence()) throw ConfigError("missing 'checks' list");
  for (const YAML::Node c : checks) {
    CheckSpec spec;
    spec.kind = str(c, "kind");
    if (std::find(check_kinds().begin(), check_kinds().end(), spec.kind) == check_kinds().end())
      throw ConfigError("unknown check kind '" + spec.kind + "'" + where(c));
    spec.name = str_or(c, "name", spec.kind);
    spec.params = c;
    validate_check(spec);
    cfg.checks.push_back(std::move(spec));
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& b : kBuiltins) names.emplace_back(b.name);
  std::sort(names.begin(), names.end());
  return names;
}

std::string builtin_scenario_text(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return b.text;
  throw ConfigError("unknown scenario '" + name + "'");
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(name_or_path, ec)) return load_scenario_file(name_or_path);
  return parse_scenario(builtin_scenario_text(name_or_path));
}

// ---------------------------------------------------------------------------

namespace {

Json run_identities() {
  const auto ids = structure_identities();
  const bool ok = std::all_of(ids.begin(), ids.end(), [](const IdentityResult& r) { return r.holds; });
  return Json{{"pass", ok}, {"identities", report::identities(ids)}};
}

std::string rational_literal(std::mt19937_64& rng, int lo, int hi, int den, bool nonzero = false) {
  std::uniform_int_distribution<int> d(lo, hi);
  int k = d(rng);
  while (nonzero && k == 0) k = d(rng);
  return "(" + std::to_string(k) + "/" + std::to_string(den) + ")";
}

Json run_invariance(const ScenarioConfig& cfg, const CheckSpec& c, const RunOptions& o) {
  const long cases = int_or(c.params, "cases", 100);
  const int order = static_cast<int>(int_or(c.params, "order", std::min(o.jet_order, 6)));
  const int degree = static_cast<int>(int_or(c.params, "degree", 4));
  const double tol = tol_of(c, o, 1e-9);
  if (order < 4) throw ConfigError("invariance needs jet order >= 4 (theta3 uses y4)");
  std::mt19937_64 rng(static_cast<std::mt19937_64::result_type>(int_or(c.params, "seed", static_cast<long>(cfg.seed))));
  double worst_inv = 0.0, worst_num = 0.0;
  for (long i = 0; i < cases; ++i) {
    std::vector<double> y;
    const std::string y0 = rational_literal(rng, -4, 4, 4);
    y.push_back(ExprAst::parse(y0).eval(0.0));
    y.push_back(ExprAst::parse(rational_literal(rng, -8, 8, 4, true)).eval(0.0));
    for (int p = 2; p <= order; ++p) y.push_back(ExprAst::parse(rational_literal(rng, -4, 4, 4)).eval(0.0));
    const Jet<double> frame = FrameCoordsY<double>{y}.to_jet();
    std::string h = rational_literal(rng, -4, 4, 4);
    for (int k = 1; k <= degree; ++k)
      h += " + " + rational_literal(rng, -8, 8, 4, k == 1) + "*(x - " + y0 + ")^" + std::to_string(k);
    const LocalDiffeo map = LocalDiffeo::explicit_map(ExprAst::parse(h));
    std::vector<double> tau;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int p = 0; p <= order; ++p) tau.push_back(u(rng));
    for (int k = 0; k <= 3; ++k) {
      worst_inv = std::max(worst_inv, check_invariance(map, k, frame));
      const double closed = theta(k, order).evaluate(y, tau);
      const double numeric = theta_numeric(k, frame, tau);
      worst_num = std::max(worst_num, std::fabs(closed - numeric) / std::max(1.0, std::fabs(closed)));
    }
  }
  return Json{{"pass", worst_inv <= tol && worst_num <= tol},
              {"cases", cases},
              {"order", order},
              {"tolerance", tol},
              {"max_invariance_residual", worst_inv},
              {"max_theta_numeric_deviation", worst_num}};
}

Json run_connection(const ScenarioConfig& cfg, const CheckSpec& c, const RunOptions& o) {
  ConnectionCandidate cand;
  const YAML::Node& p = c.params;
  std::vector<std::string> chart_names;
  for (const auto& ch : cfg.presentation.charts) chart_names.push_back(ch.name);
  Json source;
  if (p["from_conjugacy"]) {
    cand = connection_from_conjugacy(map_field(p, "from_conjugacy"), chart_names);
    source = Json{{"from_conjugacy", str(p, "from_conjugacy")}, {"T", cand.per_chart.begin()->second.to_string()}};
  } else {
    for (const auto& kv : p["candidate"]) cand.per_chart.emplace(kv.first.as<std::string>(), ExprAst::parse(kv.second.as<std::string>()));
    Json per = Json::object();
    for (const auto& [chart, e] : cand.per_chart) per[chart] = e.to_string();
    source = Json{{"candidate", per}};
  }
  cand.kind = str_or(p, "connection", "affine") == "projective" ? ConnectionKind::projective : ConnectionKind::affine;
  SampleSpec grid;
  grid.samples = static_cast<int>(int_or(p, "samples", grid.samples));
  grid.trim = num_or(p, "trim", grid.trim);
  const ConnectionReport r = verify_connection(cfg.presentation, cand, grid, tol_of(c, o, 1e-8));
  Json j{{"pass", r.pass}};
  j.update(report::connection(r));
  j["source"] = source;
  return j;
}

Json run_reeb(const CheckSpec& c) {
  const ReebReport r = reeb_probe(expr_field(c.params, "profile"), static_cast<int>(int_or(c.params, "nmax", 12)),
                                  static_cast<int>(int_or(c.params, "tail", 300)));
  const double threshold = num_or(c.params, "min_ln_fprime", 50.0);
  const bool ok = r.ratios_decreasing[0] && r.ratios_decreasing[1] && r.ratios_decreasing[2] && r.ln_fprime_increasing &&
                  r.ln_ratio_decreasing && r.max_ln_fprime > threshold;
  Json j{{"pass", ok}, {"min_ln_fprime", threshold}};
  j.update(report::reeb(r));
  return j;
}

Json run_rotation(const CheckSpec& c) {
  const LocalDiffeo phi = map_field(c.params, "map");
  const RotationEstimate r = rotation_number(phi, int_or(c.params, "iters", 100000), num_or(c.params, "z", 0.0),
                                             static_cast<int>(int_or(c.params, "power", 1)));
  Json j{{"pass", true}};
  j.update(report::rotation(r));
  if (c.params["expected"]) {
    const double expected = expr_field(c.params, "expected").eval(0.0);
    const double dist = circle_distance(r.rho, expected);
    j["expected"] = expected;
    j["distance"] = dist;
    j["pass"] = dist <= r.bound + 1e-14;
  }
  return j;
}

Json run_conjugacy(const CheckSpec& c, const RunOptions& o) {
  const double alpha = expr_field(c.params, "alpha").eval(0.0);
  const double tol = tol_of(c, o, 1e-9);
  const double r = verify_conjugacy(map_field(c.params, "map"), map_field(c.params, "conjugacy"), alpha,
                                    static_cast<int>(int_or(c.params, "samples", 256)));
  return Json{{"pass", r <= tol}, {"alpha", alpha}, {"tolerance", tol}, {"max_residual", r}};
}

Json run_diophantine(const CheckSpec& c) {
  const DiophantineReport r = diophantine_exponent(expr_field(c.params, "alpha"), num_or(c.params, "cap", 1e6));
  bool ok = true;
  if (c.params["max_exponent"]) ok = ok && r.exponent <= num_or(c.params, "max_exponent", 0.0);
  if (c.params["expect_liouville"]) ok = ok && r.liouville_suspect == c.params["expect_liouville"].as<bool>();
  Json j{{"pass", ok}};
  j.update(report::diophantine(r));
  return j;
}

Json run_fixed_points(const CheckSpec& c, const RunOptions& o) {
  const YAML::Node& p = c.params;
  FixedPointGrid grid;
  if (const YAML::Node g = p["grid"]) {
    grid.lo = num_or(g, "lo", grid.lo);
    grid.hi = num_or(g, "hi", grid.hi);
    grid.samples = static_cast<int>(int_or(g, "samples", grid.samples));
    grid.resolution = num_or(g, "resolution", grid.resolution);
    grid.side_samples = static_cast<int>(int_or(g, "side_samples", grid.side_samples));
  }
  const auto fps = classify_fixed_points(map_field(p, "map"), grid, o.tol_override > 0 ? o.tol_override : num_or(p, "tol", 1e-12));
  bool ok = true;
  Json mismatches = Json::array();
  if (const YAML::Node expect = p["expect"]) {
    for (const auto& e : expect) {
      const double x = parse_number(e["x"]);
      auto it = std::find_if(fps.begin(), fps.end(), [&](const FixedPoint& f) { return std::fabs(f.x - x) <= 1e-9; });
      std::string problem;
      if (it == fps.end()) {
        problem = "not found";
      } else {
        if (e["hyperbolic"] && e["hyperbolic"].as<bool>() != it->hyperbolic) problem = "class differs";
        if (e["left_semi_isolated"] && e["left_semi_isolated"].as<bool>() != it->left_semi_isolated)
          problem = "left semi-isolation differs";
        if (e["right_semi_isolated"] && e["right_semi_isolated"].as<bool>() != it->right_semi_isolated)
          problem = "right semi-isolation differs";
      }
      if (!problem.empty()) {
        ok = false;
        mismatches.push_back(Json{{"x", x}, {"problem", problem}});
      }
    }
  }
  return Json{{"pass", ok}, {"fixed_points", report::fixed_points(fps)}, {"mismatches", mismatches}};
}

Json run_szekeres(const CheckSpec& c, const RunOptions& o) {
  const ExprAst v = expr_field(c.params, "field");
  const int n_max = static_cast<int>(int_or(c.params, "n", 4));
  const auto xs = list_or(c.params, "xs", {0.1, 0.2, 0.5});
  const double tol = tol_of(c, o, 1e-8);
  bool ok = true;
  Json rows = Json::array();
  for (int n = 1; n <= n_max; ++n) {
    const QPolynomial q = q_polynomial(n);
    const double r = verify_szekeres_identity(v, n, xs);
    ok = ok && r <= tol && q.degree() <= n;
    rows.push_back(Json{{"n", n}, {"Q", q.to_string()}, {"degree", q.degree()}, {"residual", r}});
  }
  return Json{{"pass", ok}, {"tolerance", tol}, {"orders", rows}};
}

Json run_flow(const CheckSpec& c, const RunOptions& o) {
  const FlowReport r = flow_check(map_field(c.params, "map"), expr_field(c.params, "field"),
                                  list_or(c.params, "xs", {0.05, 0.2, 0.5}), list_or(c.params, "ts", {0.0, 0.25, 0.5}),
                                  num_or(c.params, "integration_tol", 1e-10));
  const double tol = tol_of(c, o, 1e-8);
  const double group_tol = num_or(c.params, "group_tol", 1e-7);
  bool ok = r.time_one_residual <= tol && r.group_law_residual <= group_tol;
  if (r.zero_in_domain) {
    ok = ok && std::fabs(r.v0) <= 1e-10;
    if (std::fabs(r.phi_prime0 - 1.0) <= 1e-12) ok = ok && std::fabs(r.v0_prime) <= 1e-10;
  }
  Json j{{"pass", ok}, {"tolerance", tol}, {"group_tolerance", group_tol}};
  j.update(report::flow(r));
  return j;
}

}  // namespace

Json run_check(const ScenarioConfig& config, const CheckSpec& check, const RunOptions& options) {
  Json body;
  try {
    const std::string& k = check.kind;
    if (k == "identities") body = run_identities();
    else if (k == "invariance") body = run_invariance(config, check, options);
    else if (k == "connection") body = run_connection(config, check, options);
    else if (k == "reeb-probe") body = run_reeb(check);
    else if (k == "rotation") body = run_rotation(check);
    else if (k == "conjugacy") body = run_conjugacy(check, options);
    else if (k == "diophantine") body = run_diophantine(check);
    else if (k == "fixed-points") body = run_fixed_points(check, options);
    else if (k == "szekeres") body = run_szekeres(check, options);
    else if (k == "flow") body = run_flow(check, options);
    else throw ConfigError("unknown check kind '" + k + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    body = Json{{"pass", false}, {"error", e.what()}};
  }
  Json out{{"kind", check.kind}, {"name", check.name}};
  out.update(body);
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioResult res;
  Json checks = Json::array();
  bool all = true;
  for (const auto& c : config.checks) {
    Json r = run_check(config, c, options);
    all = all && r.value("pass", false);
    checks.push_back(std::move(r));
  }
  res.pass = all;
  res.report = Json{{"schema", report::kSchema},
                    {"scenario", config.name},
                    {"description", config.description},
                    {"seed", config.seed},
                    {"pass", all},
                    {"checks", checks}};
  return res;
}

}  // namespace folcc
