// runner.hpp -- executes configured runs, writes artifacts (CSV series, JSON
// metadata, SVG plots), and provides the named acceptance presets and the
// self-check battery.
#pragma once

#include "tailsim/config.hpp"
#include "tailsim/observe.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace tailsim {

inline constexpr const char* kCodeVersion = "tailsim 1.0.0";
inline constexpr const char* kOutputRootEnv = "TAILSIM_OUT";

struct RunResult {
  int status = 0; // 0 ok, 1 aborted
  std::string dir;
  nlohmann::json metadata;
  std::map<std::string, TimeSeries> series;
};

// Executes one run; artifacts go to <root>/<name>/ where root is the config
// output directory unless overridden by the TAILSIM_OUT environment variable.
// Failures are caught: the result carries status 1 and an "aborted" marker in
// the partial metadata.
RunResult run_one(const RunConfig& c);

// Runs every config (parallel across configs up to `parallelism` workers).
// Returns 0 on success, 1 if any run aborted.
int run_suite(const std::vector<RunConfig>& configs, int parallelism);

// Named config sets; "thm-schw-l1" is the first-multipole acceptance set.
std::vector<RunConfig> preset_configs(const std::string& name);

struct SelfCheckReport {
  struct ModuleCount {
    std::string module;
    int passed = 0;
    int failed = 0;
  };
  std::vector<ModuleCount> modules;
  int total_passed = 0;
  int total_failed = 0;
};

// Exact identity battery (eigenvalues, ladders, hierarchy tables, horizon
// factorization, chart round-trips, operator transcription agreement);
// prints one line per module.
SelfCheckReport self_check(bool print = true);

} // namespace tailsim
