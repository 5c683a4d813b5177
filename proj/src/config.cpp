#include "tailsim/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tailsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& path) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: key \"" + path + "\" expects a number, got \"" + v + "\"");
  }
}

int to_int(const std::string& v, const std::string& path) {
  const double x = to_double(v, path);
  if (x != std::floor(x))
    throw std::invalid_argument("config: key \"" + path + "\" expects an integer");
  return int(x);
}

bool to_bool(const std::string& v, const std::string& path) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: key \"" + path + "\" expects a boolean");
}

std::vector<double> to_list(const std::string& v, const std::string& path) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, path));
  }
  return out;
}

std::vector<std::string> to_words(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& path, const std::string& why) {
    throw std::invalid_argument("config: key \"" + path + "\" " + why);
  };
  if (!(c.mass > 0.0)) fail("background.M", "must be positive");
  if (!(std::abs(c.spin) < c.mass)) fail("background.a", "must satisfy |a| < M");
  if (std::abs(c.s) > 2) fail("mode.s", "must satisfy |s| <= 2");
  if (c.l < std::max(1, std::abs(c.s))) fail("mode.l", "must be >= max(1, |s|)");
  if (std::abs(c.m) > c.l) fail("mode.m", "must satisfy |m| <= l");
  if (c.family != "compact-bump" && c.family != "npc-charged" &&
      c.family != "monopole-charge")
    fail("data.family", "must be compact-bump, npc-charged, or monopole-charge");
  if (c.n < 64) fail("grid.n", "must be >= 64");
  if (c.fd_order != 4) fail("grid.fd_order", "only order 4 is built");
  if (c.dissipation < 0.0 || c.dissipation > 0.5)
    fail("grid.dissipation", "must lie in [0, 0.5]");
  if (!(c.cfl > 0.0 && c.cfl <= 2.0)) fail("integration.cfl", "must lie in (0, 2]");
  if (!(c.tau_end > 0.0)) fail("integration.tau_end", "must be positive");
  for (double sg : c.obs_sigma)
    if (sg < 0.0 || sg > 1.0) fail("observers.sigma", "entries must lie in [0, 1]");
  if (c.scheme != "hyperboloidal" && c.scheme != "characteristic")
    fail("scheme.kind", "must be hyperboloidal or characteristic");
  if (!(c.ch_h > 0.0)) fail("characteristic.h", "must be positive");
  if (!(c.ch_vmax > c.ch_v0)) fail("characteristic.v_max", "must exceed v0");
  if (!(c.ch_umax > c.ch_u0)) fail("characteristic.u_max", "must exceed u0");
  for (const auto& f : c.out_formats)
    if (f != "csv" && f != "json" && f != "svg")
      fail("outputs.formats", "entries must be csv, json, or svg");
  if (!(c.sample_dt > 0.0)) fail("run.sample_dt", "must be positive");
  if (!(c.energy_dt > 0.0)) fail("run.energy_dt", "must be positive");
}

} // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header at line " +
                                    std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string path = section + "." + key;

    if (path == "background.M") c.mass = to_double(val, path);
    else if (path == "background.a") c.spin = to_double(val, path);
    else if (path == "mode.s") c.s = to_int(val, path);
    else if (path == "mode.l") c.l = to_int(val, path);
    else if (path == "mode.m") c.m = to_int(val, path);
    else if (path == "data.family") c.family = val;
    else if (path == "data.amplitude") c.amplitude = to_double(val, path);
    else if (path == "data.center") c.center = to_double(val, path);
    else if (path == "data.width") c.width = to_double(val, path);
    else if (path == "data.n_inf") c.n_inf = to_double(val, path);
    else if (path == "data.cutoff") c.cutoff = to_double(val, path);
    else if (path == "data.charge") c.charge = to_double(val, path);
    else if (path == "grid.n") c.n = to_int(val, path);
    else if (path == "grid.fd_order") c.fd_order = to_int(val, path);
    else if (path == "grid.dissipation") c.dissipation = to_double(val, path);
    else if (path == "integration.cfl") { c.cfl = to_double(val, path); c.cfl_was_set = true; }
    else if (path == "integration.tau_end") c.tau_end = to_double(val, path);
    else if (path == "observers.sigma") c.obs_sigma = to_list(val, path);
    else if (path == "observers.scri") c.obs_scri = to_bool(val, path);
    else if (path == "scheme.kind") c.scheme = val;
    else if (path == "characteristic.h") c.ch_h = to_double(val, path);
    else if (path == "characteristic.u0") c.ch_u0 = to_double(val, path);
    else if (path == "characteristic.v0") c.ch_v0 = to_double(val, path);
    else if (path == "characteristic.u_max") c.ch_umax = to_double(val, path);
    else if (path == "characteristic.v_max") c.ch_vmax = to_double(val, path);
    else if (path == "characteristic.observers_r") c.ch_obs_r = to_list(val, path);
    else if (path == "fit.window_lo_frac") c.fit_window_lo_frac = to_double(val, path);
    else if (path == "fit.tau_a") c.fit_tau_a = to_double(val, path);
    else if (path == "fit.tau_b") c.fit_tau_b = to_double(val, path);
    else if (path == "outputs.directory") c.out_dir = val;
    else if (path == "outputs.name") c.out_name = val;
    else if (path == "outputs.formats") {
      c.out_formats.clear();
      for (auto& w : to_words(val)) c.out_formats.push_back(w);
    } else if (path == "run.seed") c.seed = (unsigned long)to_double(val, path);
    else if (path == "run.sample_dt") c.sample_dt = to_double(val, path);
    else if (path == "run.energy_dt") c.energy_dt = to_double(val, path);
    else
      throw std::invalid_argument("config: unknown key \"" + path + "\"");
  }
  validate(c);
  return c;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o.precision(17);
  o << "[background]\nM = " << c.mass << "\na = " << c.spin << "\n";
  o << "[mode]\ns = " << c.s << "\nl = " << c.l << "\nm = " << c.m << "\n";
  o << "[data]\nfamily = " << c.family << "\namplitude = " << c.amplitude
    << "\ncenter = " << c.center << "\nwidth = " << c.width << "\nn_inf = " << c.n_inf
    << "\ncutoff = " << c.cutoff << "\ncharge = " << c.charge << "\n";
  o << "[grid]\nn = " << c.n << "\nfd_order = " << c.fd_order
    << "\ndissipation = " << c.dissipation << "\n";
  o << "[integration]\ncfl = " << c.cfl << "\ntau_end = " << c.tau_end << "\n";
  o << "[observers]\nsigma = ";
  for (size_t i = 0; i < c.obs_sigma.size(); ++i)
    o << (i ? ", " : "") << c.obs_sigma[i];
  o << "\nscri = " << (c.obs_scri ? "true" : "false") << "\n";
  o << "[scheme]\nkind = " << c.scheme << "\n";
  o << "[characteristic]\nh = " << c.ch_h << "\nu0 = " << c.ch_u0 << "\nv0 = " << c.ch_v0
    << "\nu_max = " << c.ch_umax << "\nv_max = " << c.ch_vmax << "\nobservers_r = ";
  for (size_t i = 0; i < c.ch_obs_r.size(); ++i) o << (i ? ", " : "") << c.ch_obs_r[i];
  o << "\n";
  o << "[fit]\nwindow_lo_frac = " << c.fit_window_lo_frac << "\ntau_a = " << c.fit_tau_a
    << "\ntau_b = " << c.fit_tau_b << "\n";
  o << "[outputs]\ndirectory = " << c.out_dir << "\nname = " << c.out_name
    << "\nformats = ";
  for (size_t i = 0; i < c.out_formats.size(); ++i) o << (i ? "," : "") << c.out_formats[i];
  o << "\n";
  o << "[run]\nseed = " << c.seed << "\nsample_dt = " << c.sample_dt
    << "\nenergy_dt = " << c.energy_dt << "\n";
  return o.str();
}

std::map<std::string, std::string> config_echo(const RunConfig& c) {
  std::map<std::string, std::string> m;
  std::stringstream ss(serialize_config(c));
  std::string line, section;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    m[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  m["integration.cfl_defaulted"] = c.cfl_was_set ? "false" : "true";
  return m;
}

} // namespace tailsim
