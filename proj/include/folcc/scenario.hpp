#pragma once

// Scenario files: a pseudogroup presentation plus a list of checks, read from
// YAML and run into a deterministic JSON report.

#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "folcc/diffeo.hpp"
#include "folcc/report.hpp"

namespace folcc {

struct CheckSpec {
  std::string kind;
  std::string name;
  YAML::Node params;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  unsigned long seed = 1;
  std::string output;  // optional report path
  PseudogroupPresentation presentation;
  std::vector<CheckSpec> checks;
};

/// Check kinds understood by run_scenario.
const std::vector<std::string>& check_kinds();

/// Parses and validates; every expression must parse and every check kind must exist.
/// Throws ConfigError with a diagnostic on failure.
ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Names of the scenarios compiled into the binary (the files under scenarios/).
std::vector<std::string> builtin_scenario_names();
/// YAML text of a built-in scenario; throws ConfigError for unknown names.
std::string builtin_scenario_text(const std::string& name);
/// A readable file path wins over a built-in name.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

struct ScenarioResult {
  bool pass = false;
  report::Json report;
};

struct RunOptions {
  int jet_order = kDefaultJetOrder;
  double tol_override = 0.0;  // > 0 replaces per-check tolerances
};

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Result of one check as a JSON object with "kind", "name" and "pass".
report::Json run_check(const ScenarioConfig& config, const CheckSpec& check, const RunOptions& options = {});

/// Reads numbers written either as YAML numbers or as expression strings ("sqrt(2)", "inf").
double parse_number(const YAML::Node& node);
Interval parse_interval(const YAML::Node& node);

}  // namespace folcc
