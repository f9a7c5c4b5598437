#include "doctest.h"

#include <cmath>
#include <fstream>
#include <filesystem>

#include "folcc/error.hpp"
#include "folcc/scenario.hpp"

using namespace folcc;

namespace {

const char* kMinimal = R"(name: mini
presentation:
  charts:
    - {name: R, interval: [-1, 1]}
  generators:
    - {name: g, map: "2*x", source: R, target: R}
checks:
  - kind: identities
)";

std::string with_check(const std::string& check) {
  std::string s = kMinimal;
  return s.substr(0, s.find("checks:")) + "checks:\n" + check;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal scenario parses") {
  const auto cfg = parse_scenario(kMinimal);
  CHECK(cfg.name == "mini");
  CHECK(cfg.seed == 1);
  REQUIRE(cfg.checks.size() == 1);
  CHECK(cfg.checks[0].kind == "identities");
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS((void)parse_scenario("name: [unterminated"), ConfigError);
  CHECK_THROWS_AS((void)parse_scenario("name: x\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_scenario(with_check("  - kind: no-such-check\n")), ConfigError);
  std::string bad = kMinimal;
  bad.replace(bad.find("2*x"), 3, "2*+");
  CHECK_THROWS_AS((void)parse_scenario(bad), ConfigError);
  CHECK_THROWS_AS((void)load_scenario_file(FOLCC_SOURCE_DIR "/tests/data/bad_config.yaml"), ConfigError);
  CHECK_THROWS_AS((void)builtin_scenario_text("nope"), ConfigError);
}

TEST_CASE("built-in scenarios are the files under scenarios/") {
  const auto names = builtin_scenario_names();
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(FOLCC_SOURCE_DIR "/scenarios"))
    if (e.path().extension() == ".yaml") files.push_back(e.path().stem().string());
  std::sort(files.begin(), files.end());
  auto sorted = names;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == files);
}

TEST_CASE("every built-in scenario passes") {
  for (const auto& n : builtin_scenario_names()) {
    const auto r = run_scenario(resolve_scenario(n));
    CHECK_MESSAGE(r.pass, n << "\n" << r.report.dump(2));
    CHECK(r.report["pass"].get<bool>() == r.pass);
  }
}

TEST_CASE("reports are deterministic and ordered") {
  const auto cfg = resolve_scenario("resilient");
  const auto a = run_scenario(cfg).report.dump();
  const auto b = run_scenario(cfg).report.dump();
  CHECK(a == b);

  const auto rep = run_scenario(resolve_scenario("translation")).report;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rep.items()) keys.push_back(k);
  REQUIRE(keys.size() >= 6);
  const std::vector<std::string> head(keys.begin(), keys.begin() + 6);
  CHECK(head == std::vector<std::string>{"schema", "scenario", "description", "seed", "pass", "checks"});
  CHECK(rep["schema"] == "folcc-report/1");
  for (const auto& c : rep["checks"]) {
    CHECK(c.contains("kind"));
    CHECK(c.contains("pass"));
  }
}

TEST_CASE("a failing check fails the scenario") {
  const auto r = run_scenario(load_scenario_file(FOLCC_SOURCE_DIR "/tests/data/failing_check.yaml"));
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.report["checks"][0]["pass"].get<bool>());
}

TEST_CASE("numbers as YAML scalars or expressions") {
  CHECK(parse_number(YAML::Load("0.5")) == 0.5);
  CHECK(parse_number(YAML::Load("\"sqrt(2)\"")) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(parse_number(YAML::Load("\"1/3\"")) == doctest::Approx(1.0 / 3));
  CHECK(std::isinf(parse_number(YAML::Load("inf"))));
  CHECK(parse_number(YAML::Load("-inf")) < 0);
  const auto iv = parse_interval(YAML::Load("[-1, \"1/2\"]"));
  CHECK(iv.lo == -1.0);
  CHECK(iv.hi == 0.5);
}

TEST_CASE("a readable file wins over a built-in name") {
  const auto dir = std::filesystem::temp_directory_path() / "folcc_scenario_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "translation";
  { std::ofstream(path) << kMinimal; }
  CHECK(resolve_scenario(path.string()).name == "mini");
  CHECK(resolve_scenario("translation").name == "translation");
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
