// folcc: command-line front end.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad arguments or config.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "folcc/dynamics.hpp"
#include "folcc/error.hpp"
#include "folcc/frames.hpp"
#include "folcc/gf.hpp"
#include "folcc/report.hpp"
#include "folcc/scenario.hpp"

using namespace folcc;
using report::Json;

namespace {

struct Globals {
  bool json = false;
  bool csv = false;
  double tol = 0.0;
  unsigned long seed = 1;
  int jet_order = kDefaultJetOrder;
};

// Reports are always JSON; --csv swaps in the report's main table.
int emit(const Globals& g, Json body, const char* table, bool pass = true) {
  Json doc{{"schema", report::kSchema}};
  doc.update(body);
  if (g.csv && table != nullptr && doc.contains(table)) {
    std::cout << report::csv(doc[table]);
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return pass ? 0 : 1;
}

gf::Flavor parse_flavor(const std::string& name, int max_index) {
  if (name == "full") return gf::Flavor::full();
  if (name == "o1") return gf::Flavor::o1();
  if (name == "gl1") return gf::Flavor::gl1();
  if (name == "duminy") return gf::Flavor::duminy(max_index);
  throw ArgumentError("unknown flavor '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic classes of codimension-one foliations: cohomology, frames, connections, dynamics"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "emit JSON (the default)");
  app.add_flag("--csv", g.csv, "emit the main table as CSV");
  app.add_option("--tol", g.tol, "override check tolerances");
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_option("--jet-order", g.jet_order, "jet order (<= 16)")->check(CLI::Range(1, kMaxJetOrder));

  int result = 0;

  // gf-cohomology
  auto* gfc = app.add_subcommand("gf-cohomology", "cohomology of the Gelfand-Fuchs complex");
  std::string flavor = "full";
  int degree = 3, wmin = 0, wmax = 0, max_index = 2;
  gfc->add_option("--flavor", flavor, "full | o1 | gl1 | duminy")->check(CLI::IsMember({"full", "o1", "gl1", "duminy"}));
  gfc->add_option("--degree", degree)->required();
  gfc->add_option("--weight-min", wmin);
  gfc->add_option("--weight-max", wmax);
  gfc->add_option("--max-index", max_index, "k for the duminy flavor");
  gfc->callback([&] {
    if (wmax < wmin) throw ArgumentError("--weight-max below --weight-min");
    const auto groups = gf::cohomology(parse_flavor(flavor, max_index), degree, wmin, wmax);
    Json rows = report::cohomology(groups);
    if (g.csv)
      for (auto& r : rows) r.erase("representatives");
    result = emit(g, Json{{"command", "gf-cohomology"}, {"flavor", parse_flavor(flavor, max_index).name()},
                          {"degree", degree}, {"weights", rows}},
                  "weights");
  });

  // identities
  auto* ids = app.add_subcommand("identities", "exact identity suite for the canonical forms");
  ids->callback([&] {
    const auto r = structure_identities();
    bool ok = true;
    for (const auto& i : r) ok = ok && i.holds;
    result = emit(g, Json{{"command", "identities"}, {"pass", ok}, {"identities", report::identities(r)}}, "identities", ok);
  });

  // connection verify
  auto* conn = app.add_subcommand("connection", "connection cocycle checks");
  auto* verify = conn->add_subcommand("verify", "verify the candidates of a scenario file");
  conn->require_subcommand(1);
  std::string config_path, conn_kind = "affine";
  int samples = 256;
  verify->add_option("--config", config_path, "scenario file or built-in name")->required();
  verify->add_option("--kind", conn_kind)->check(CLI::IsMember({"affine", "projective"}));
  verify->add_option("--samples", samples);
  verify->callback([&] {
    const ScenarioConfig cfg = resolve_scenario(config_path);
    RunOptions opt{g.jet_order, g.tol};
    Json checks = Json::array();
    bool ok = true;
    for (const auto& c : cfg.checks) {
      if (c.kind != "connection" || c.params["connection"].as<std::string>("affine") != conn_kind) continue;
      CheckSpec spec = c;
      spec.params = YAML::Clone(c.params);
      spec.params["samples"] = samples;
      Json r = run_check(cfg, spec, opt);
      ok = ok && r.value("pass", false);
      checks.push_back(std::move(r));
    }
    if (checks.empty()) throw ConfigError("no " + conn_kind + " connection checks in '" + config_path + "'");
    result = emit(g, Json{{"command", "connection verify"}, {"scenario", cfg.name}, {"pass", ok}, {"checks", checks}},
                  nullptr, ok);
  });

  // gysin
  auto* gys = app.add_subcommand("gysin", "fiber integration of an x-chart form");
  std::string form_spec;
  gys->add_option("--form", form_spec, "e.g. 'theta0^theta1^theta2' or '2*x2*dx1^dx0'")->required();
  gys->callback([&] {
    const int order = std::max(4, g.jet_order);
    const auto form = parse_x_form(form_spec, order);
    const auto image = forms::gysin(form);
    result = emit(g, Json{{"command", "gysin"}, {"form", form.to_string()}, {"gysin", image.to_string()}}, nullptr);
  });

  // rotation
  auto* rot = app.add_subcommand("rotation", "rotation number of a circle-map lift");
  std::string map_spec;
  long iters = 100000;
  double z0 = 0.0;
  int power = 1;
  rot->add_option("--map", map_spec, "lift:EXPR | conj:PROFILE@SHIFT")->required();
  rot->add_option("--iters", iters);
  rot->add_option("--z", z0);
  rot->add_option("--power", power, "estimate for the power-th iterate");
  rot->callback([&] {
    const auto est = rotation_number(LocalDiffeo::parse(map_spec), iters, z0, power);
    Json body = report::rotation(est);
    result = emit(g, Json{{"command", "rotation"}, {"map", map_spec}, {"estimate", body}, {"table", Json::array({body})}},
                  "table");
  });

  // diophantine
  auto* dio = app.add_subcommand("diophantine", "Diophantine exponent from continued fractions");
  std::string alpha;
  double cap = 1e6;
  dio->add_option("--alpha", alpha)->required();
  dio->add_option("--cap", cap);
  dio->callback([&] {
    Json body = report::diophantine(diophantine_exponent(ExprAst::parse(alpha), cap));
    Json doc{{"command", "diophantine"}, {"alpha", alpha}, {"cap", cap}};
    doc.update(body);
    result = emit(g, doc, "convergents");
  });

  // szekeres
  auto* sz = app.add_subcommand("szekeres", "Q_n recursion and the Szekeres identity");
  std::string field;
  int n = 4;
  std::vector<double> xs{0.1, 0.2, 0.5};
  sz->add_option("--field", field)->required();
  sz->add_option("--n", n);
  sz->add_option("--x", xs, "sample points");
  sz->callback([&] {
    const ExprAst v = ExprAst::parse(field);
    const double tol = g.tol > 0 ? g.tol : 1e-8;
    Json rows = Json::array();
    bool ok = true;
    for (int k = 1; k <= n; ++k) {
      const QPolynomial q = q_polynomial(k);
      const double r = verify_szekeres_identity(v, k, xs);
      ok = ok && r <= tol;
      rows.push_back(Json{{"n", k}, {"Q", q.to_string()}, {"degree", q.degree()}, {"residual", r}});
    }
    result = emit(g, Json{{"command", "szekeres"}, {"field", field}, {"tolerance", tol}, {"pass", ok}, {"orders", rows}},
                  "orders", ok);
  });

  // reeb-probe
  auto* rp = app.add_subcommand("reeb-probe", "limits of f^(k)/f'^k and ln f' along f^-1(n)");
  std::string profile = "exp(1/(1 - x^2)) - exp(1)";
  int nmax = 12, tail = 300;
  rp->add_option("--profile", profile);
  rp->add_option("--nmax", nmax);
  rp->add_option("--tail", tail, "largest j in the tail n = 10^j");
  rp->callback([&] {
    Json doc{{"command", "reeb-probe"}, {"profile", profile}};
    doc.update(report::reeb(reeb_probe(ExprAst::parse(profile), nmax, tail)));
    result = emit(g, doc, "rows");
  });

  // fixed-points
  auto* fp = app.add_subcommand("fixed-points", "fixed points and their classes");
  FixedPointGrid grid;
  std::string fp_map;
  fp->add_option("--map", fp_map, "EXPR | conj:PROFILE@SHIFT | reeb:PROFILE")->required();
  fp->add_option("--lo", grid.lo);
  fp->add_option("--hi", grid.hi);
  fp->add_option("--samples", grid.samples);
  fp->add_option("--resolution", grid.resolution);
  fp->callback([&] {
    const auto pts = classify_fixed_points(LocalDiffeo::parse(fp_map), grid, g.tol > 0 ? g.tol : 1e-12);
    result = emit(g, Json{{"command", "fixed-points"}, {"map", fp_map}, {"fixed_points", report::fixed_points(pts)}},
                  "fixed_points");
  });

  // scenario
  auto* sc = app.add_subcommand("scenario", "run a scenario (built-in name or YAML file)");
  std::string scenario_name, out_path;
  sc->add_option("name", scenario_name)->required();
  sc->add_option("--out", out_path, "also write the report here");
  sc->callback([&] {
    const ScenarioConfig cfg = resolve_scenario(scenario_name);
    ScenarioConfig run = cfg;
    if (app.get_option("--seed")->count() > 0) run.seed = g.seed;
    const ScenarioResult res = run_scenario(run, RunOptions{g.jet_order, g.tol});
    const std::string text = res.report.dump(2) + "\n";
    const std::string path = out_path.empty() ? cfg.output : out_path;
    if (!path.empty()) {
      std::ofstream out(path);
      if (!out) throw ConfigError("cannot write '" + path + "'");
      out << text;
    }
    if (g.csv) {
      Json rows = Json::array();
      for (const auto& c : res.report["checks"]) rows.push_back(Json{{"kind", c["kind"]}, {"name", c["name"]}, {"pass", c["pass"]}});
      std::cout << report::csv(rows);
    } else {
      std::cout << text;
    }
    result = res.pass ? 0 : 1;
  });

  auto* ls = app.add_subcommand("list-scenarios", "names of the built-in scenarios");
  ls->callback([&] {
    Json rows = Json::array();
    for (const auto& name : builtin_scenario_names()) {
      const ScenarioConfig cfg = parse_scenario(builtin_scenario_text(name));
      rows.push_back(Json{{"name", name}, {"description", cfg.description}, {"checks", cfg.checks.size()}});
    }
    result = emit(g, Json{{"command", "list-scenarios"}, {"scenarios", rows}}, "scenarios");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << Json{{"error", "config"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << Json{{"error", "parse"}, {"message", e.what()}, {"offset", e.offset()}}.dump() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << Json{{"error", "argument"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << Json{{"error", "evaluation"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return result;
}
