// config.hpp -- run configuration: a small nested key-value format with a
// strict schema (unknown keys rejected with their path), defaults echoed into
// run metadata.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace tailsim {

struct RunConfig {
  // background
  double mass = 1.0;
  double spin = 0.0;
  // mode
  int s = -1;
  int l = 1;
  int m = 0;
  // data
  std::string family = "compact-bump"; // compact-bump | npc-charged | monopole-charge
  double amplitude = 1.0;
  double center = 8.0;
  double width = 0.75;
  double n_inf = 1.0;
  double cutoff = 40.0;
  double charge = 0.0;
  // grid
  int n = 1024;
  int fd_order = 4;
  double dissipation = 0.01;
  // integration
  double cfl = 0.5;
  bool cfl_was_set = false;
  double tau_end = 200.0;
  // observers
  std::vector<double> obs_sigma = {0.2};
  bool obs_scri = true;
  // scheme
  std::string scheme = "hyperboloidal"; // hyperboloidal | characteristic
  // characteristic lattice
  double ch_h = 0.125;
  double ch_u0 = 0.0;
  double ch_v0 = 4.0;
  double ch_umax = 400.0;
  double ch_vmax = 440.0;
  std::vector<double> ch_obs_r = {10.0};
  // fit
  double fit_window_lo_frac = 0.5;
  double fit_tau_a = -1.0;
  double fit_tau_b = -1.0;
  // outputs
  std::string out_dir = "out";
  std::string out_name = "run";
  std::vector<std::string> out_formats = {"csv", "json", "svg"};
  // run
  unsigned long seed = 20240901ul;
  double sample_dt = 0.25;
  double energy_dt = 2.0;
};

// Throws std::invalid_argument naming the offending key path (for example
// "background.a") on unknown keys or out-of-range values.
RunConfig parse_config(const std::string& text);

// Canonical text form; parse(serialize(c)) reproduces c.
std::string serialize_config(const RunConfig& c);

// Flat echo of every effective setting (defaults included) for metadata.
std::map<std::string, std::string> config_echo(const RunConfig& c);

} // namespace tailsim
