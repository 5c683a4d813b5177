#include <doctest.h>

#include "tailsim/artifacts.hpp"
#include "tailsim/runner.hpp"
#include "tailsim/spinweight.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tailsim;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_run(const std::string& name) {
  RunConfig c;
  c.s = -1;
  c.l = 1;
  c.n = 256;
  c.cfl = 1.0;
  c.cfl_was_set = true;
  c.tau_end = 30.0;
  c.family = "compact-bump";
  c.amplitude = 1.0;
  c.center = 8.0;
  c.width = 0.75;
  c.out_dir = "/tmp/tailsim_test_out";
  c.out_name = name;
  return c;
}

} // namespace

TEST_CASE("config round-trip and defaults") {
  const std::string text = "[background]\nM = 1.0\na = 0.0\n[mode]\ns = -1\nl = 1\n";
  const RunConfig c = parse_config(text);
  CHECK(c.cfl == 0.5);        // defaulting contract
  CHECK(!c.cfl_was_set);      // recorded as defaulted in the echo
  CHECK(config_echo(c).at("integration.cfl_defaulted") == "true");
  const std::string canon = serialize_config(c);
  const RunConfig c2 = parse_config(canon);
  CHECK(serialize_config(c2) == canon); // normalize is idempotent
  CHECK(c2.mass == c.mass);
  CHECK(c2.obs_sigma == c.obs_sigma);
}

TEST_CASE("config errors name the key path") {
  CHECK_THROWS_WITH_AS(parse_config("[background]\nM = 1\na = 1.5\n"),
                       doctest::Contains("background.a"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("[background]\nbogus = 1\n"),
                       doctest::Contains("background.bogus"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("[grid]\nn = 32\n"), doctest::Contains("grid.n"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[mode]\ns = 5\n"), std::invalid_argument);
}

TEST_CASE("identical configs give bit-identical artifacts") {
  std::filesystem::remove_all("/tmp/tailsim_test_out");
  const RunResult r1 = run_one(small_run("det_a"));
  const RunResult r2 = run_one(small_run("det_b"));
  REQUIRE(r1.status == 0);
  REQUIRE(r2.status == 0);
  const std::string f1 = slurp(r1.dir + "/psi_minus_r10.csv");
  const std::string f2 = slurp(r2.dir + "/psi_minus_r10.csv");
  CHECK(!f1.empty());
  CHECK(f1 == f2);
}

TEST_CASE("metadata validates against the shipped schema") {
  const RunResult r = run_one(small_run("schema_check"));
  REQUIRE(r.status == 0);
  const std::string schema = slurp(std::string(TAILSIM_SOURCE_DIR) +
                                   "/schemas/run_metadata.schema.json");
  REQUIRE(!schema.empty());
  const std::string verdict = validate_against_schema(schema, r.metadata.dump());
  CHECK(verdict == "");
  // a broken document is rejected with a location
  CHECK(validate_against_schema(schema, R"({"status":"ok"})") != "");
}

TEST_CASE("aborted runs keep partial artifacts with the marker") {
  RunConfig c = small_run("aborts");
  c.family = "monopole-charge"; // rejected by the hyperboloidal data builder
  const RunResult r = run_one(c);
  CHECK(r.status == 1);
  CHECK(r.metadata.at("status") == "aborted");
  CHECK(std::filesystem::exists(r.dir + "/metadata.json"));
}

TEST_CASE("empty suite is a no-op success") { CHECK(run_suite({}, 4) == 0); }

TEST_CASE("acceptance preset exists and is well formed") {
  const auto configs = preset_configs("thm-schw-l1");
  CHECK(configs.size() >= 5);
  for (const auto& c : configs) {
    CHECK((c.scheme == "hyperboloidal" || c.scheme == "characteristic"));
    if (c.scheme == "hyperboloidal") CHECK(c.n == 4096);
  }
  CHECK_THROWS_AS(preset_configs("nope"), std::invalid_argument);
}

TEST_CASE("self-check passes on a fresh build and reports per-module counts") {
  const SelfCheckReport rep = self_check(false);
  CHECK(rep.total_failed == 0);
  CHECK(rep.modules.size() >= 6);
  for (const auto& m : rep.modules) CHECK(m.passed > 0);
}

TEST_CASE("a perturbed ladder sign is caught by the TSI coefficient identity") {
  test_hooks::ladder_sign = -1;
  const SelfCheckReport rep = self_check(false);
  test_hooks::ladder_sign = +1;
  CHECK(rep.total_failed > 0);
  bool spin_module_failed = false;
  for (const auto& m : rep.modules)
    if (m.module == "spinweight" && m.failed > 0) spin_module_failed = true;
  CHECK(spin_module_failed);
}

TEST_CASE("csv round-trip preserves the series") {
  TimeSeries s;
  for (int i = 0; i < 20; ++i) s.push(1.0 + i, {std::sin(0.1 * i), std::cos(0.2 * i)});
  apply_floor_flags(s);
  write_series_csv("/tmp/tailsim_test_out/roundtrip.csv", s);
  const TimeSeries r = read_series_csv("/tmp/tailsim_test_out/roundtrip.csv");
  REQUIRE(r.tau.size() == s.tau.size());
  for (size_t i = 0; i < s.tau.size(); ++i) {
    CHECK(r.tau[i] == s.tau[i]); // 17 significant digits round-trip doubles
    CHECK(r.val[i] == s.val[i]);
  }
}

TEST_CASE("suite executes runs in parallel and aggregates status") {
  std::filesystem::remove_all("/tmp/tailsim_suite_out");
  RunConfig a = small_run("suite_a");
  RunConfig b = small_run("suite_b");
  a.out_dir = b.out_dir = "/tmp/tailsim_suite_out";
  CHECK(run_suite({a, b}, 2) == 0);
  CHECK(std::filesystem::exists("/tmp/tailsim_suite_out/suite_a/metadata.json"));
  CHECK(std::filesystem::exists("/tmp/tailsim_suite_out/suite_b/metadata.json"));
  RunConfig bad = small_run("suite_bad");
  bad.out_dir = "/tmp/tailsim_suite_out";
  bad.family = "monopole-charge";
  CHECK(run_suite({a, bad}, 2) == 1); // aborted run yields a nonzero status
}

TEST_CASE("csv header names the stable column order") {
  const RunResult r = run_one(small_run("header_check"));
  std::ifstream in(r.dir + "/psi_minus_r10.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "tau,re,im,abs,lpi,flags");
}
