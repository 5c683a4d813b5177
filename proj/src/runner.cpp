#include "tailsim/runner.hpp"

#include "tailsim/artifacts.hpp"
#include "tailsim/characteristic.hpp"
#include "tailsim/evolve.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>

namespace tailsim {

namespace {

using nlohmann::json;

std::string output_root(const RunConfig& c) {
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return env;
  return c.out_dir;
}

bool wants(const RunConfig& c, const char* fmt) {
  for (const auto& f : c.out_formats)
    if (f == fmt) return true;
  return false;
}

json fit_json(const TailFit& f) {
  return json{{"exponent", f.exponent},
              {"tau_a", f.tau_a},
              {"tau_b", f.tau_b},
              {"residual", f.residual},
              {"ringing_advanced", f.ringing_advanced}};
}

void emit_series(const RunConfig& c, const std::string& dir, const std::string& name,
                 const TimeSeries& s, json& series_list, bool fit_it) {
  json entry{{"name", name}, {"file", name + ".csv"}};
  if (wants(c, "csv")) write_series_csv(dir + "/" + name + ".csv", s);
  if (wants(c, "svg")) write_loglog_svg(dir + "/" + name + ".svg", name, s);
  if (fit_it) {
    try {
      FitOptions opt;
      opt.window_lo_frac = c.fit_window_lo_frac;
      opt.tau_a = c.fit_tau_a;
      opt.tau_b = c.fit_tau_b;
      entry["fit"] = fit_json(local_power_index(s, opt));
    } catch (const std::exception& e) {
      entry["fit_error"] = e.what();
    }
  }
  series_list.push_back(entry);
}

void run_hyperboloidal(const RunConfig& c, RunResult& out, json& meta) {
  const Background bg = make_background(c.mass, c.spin);
  auto grid = std::make_shared<RadialGrid>(make_radial_grid(bg, c.n));
  const SystemKind kind = c.s >= 0 ? SystemKind::SpinPlus : SystemKind::SpinMinusTriple;
  const ModeIndex mode{c.s, c.l, c.m};
  const SystemOperators sys = make_system(bg, mode, grid, kind);

  DataFamily fam;
  if (c.family == "compact-bump") fam.kind = DataFamily::Kind::CompactBump;
  else if (c.family == "npc-charged") fam.kind = DataFamily::Kind::NpcCharged;
  else fam.kind = DataFamily::Kind::MonopoleCharge;
  fam.amplitude = c.amplitude;
  fam.center = c.center;
  fam.width = c.width;
  fam.n_inf = c.n_inf;
  fam.cutoff = c.cutoff;
  fam.charge = c.charge;

  HyperState st = make_initial_data(fam, mode, sys);
  HyperEvolver ev(sys, std::move(st), c.cfl, c.dissipation);
  const HierarchySpec hspec = hierarchy_coefficients(std::max(4, c.l + 2));

  const FieldId base = kind == SystemKind::SpinPlus ? FieldId::PsiPlus : FieldId::PhiMinus0;
  struct Obs {
    double sigma;
    int node = 0;
    double psi_factor = 1.0;
    TimeSeries series;
    std::string name;
  };
  std::vector<Obs> observers;
  for (double sg : c.obs_sigma) {
    Obs o;
    o.sigma = sg;
    o.node = int(std::lround(sg * (c.n - 1)));
    const double snode = grid->sigma[o.node];
    if (snode > 0.0 && snode < 1.0) {
      const double r = bg.r_plus / snode;
      o.psi_factor = 1.0 / ((1.0 - snode) * r); // psi = (base field)/(mu r)
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s_r%.4g", kind == SystemKind::SpinPlus ? "psi_plus" : "psi_minus",
                    r);
      o.name = buf;
      observers.push_back(o);
    }
  }
  if (c.obs_scri) {
    Obs o;
    o.sigma = 0.0;
    o.node = 0;
    o.psi_factor = 1.0;
    o.name = "rad_scri";
    observers.push_back(o);
  }

  TimeSeries en00, en01, en02, npc_series, drift0, drift1;
  const EnergySelector esel =
      kind == SystemKind::SpinPlus ? EnergySelector::PsiPlusField : EnergySelector::PsiMinusPair;
  NPConstantRecord npc_rec;
  npc_rec.index = c.l;

  const int sample_every = std::max(1, int(std::lround(c.sample_dt / ev.dt())));
  long step_count = 0;
  double energy_next = 0.0;
  StepHooks hooks;
  hooks.post_step = [&](double, const HyperState& stt) {
    if (++step_count % sample_every == 0) {
      for (auto& o : observers)
        o.series.push(stt.tau, stt.of(base).f[0][o.node] * o.psi_factor);
    }
    if (stt.tau >= energy_next) {
      energy_next += c.energy_dt;
      en00.push(stt.tau, energy_F(stt, {0, 0.0, esel}, sys));
      en01.push(stt.tau, energy_F(stt, {0, 1.0, esel}, sys));
      en02.push(stt.tau, energy_F(stt, {0, 2.0, esel}, sys));
      if (c.l == 1) {
        bool fl = false;
        const auto v = np_constant(stt, c.l, c.s >= 0 ? 1 : -1, sys, hspec, &fl);
        npc_series.push(stt.tau, v);
        npc_rec.tau.push_back(stt.tau);
        npc_rec.value.push_back(v);
        npc_rec.flagged |= fl;
      }
      if (kind == SystemKind::SpinMinusTriple) {
        const ConstraintDrift d = constraint_drift(stt, sys);
        drift0.push(stt.tau, d.c0_rel);
        drift1.push(stt.tau, d.c1_rel);
      }
    }
  };
  ev.run_until(c.tau_end, hooks);

  json series_list = json::array();
  for (auto& o : observers) {
    apply_floor_flags(o.series);
    emit_series(c, out.dir, o.name, o.series, series_list, true);
    out.series[o.name] = std::move(o.series);
  }
  for (auto [name, sp] : {std::pair{"energy_F00", &en00}, {"energy_F01", &en01},
                          {"energy_F02", &en02}}) {
    apply_floor_flags(*sp);
    emit_series(c, out.dir, name, *sp, series_list, true);
    out.series[name] = std::move(*sp);
  }
  if (!npc_series.tau.empty()) {
    emit_series(c, out.dir, "npc", npc_series, series_list, false);
    const double drift = npc_rec.relative_drift(200.0, c.tau_end);
    meta["np_constant"] = json{{"index", npc_rec.index},
                               {"real", npc_rec.value.back().real()},
                               {"imag", npc_rec.value.back().imag()},
                               {"relative_drift", drift},
                               {"extrapolation_order", npc_rec.extrapolation_order},
                               {"flagged", npc_rec.flagged}};
    out.series["npc"] = std::move(npc_series);
  }
  if (!drift0.tau.empty()) {
    emit_series(c, out.dir, "constraint_c0", drift0, series_list, false);
    emit_series(c, out.dir, "constraint_c1", drift1, series_list, false);
    meta["constraints"] = json{{"c0_rel_final", drift0.val.back().real()},
                               {"c1_rel_final", drift1.val.back().real()}};
    out.series["constraint_c0"] = std::move(drift0);
    out.series["constraint_c1"] = std::move(drift1);
  }
  meta["series"] = series_list;
}

void run_characteristic(const RunConfig& c, RunResult& out, json& meta) {
  const Background bg = make_background(c.mass, c.spin);
  DiamondSpec spec;
  spec.u0 = c.ch_u0;
  spec.v0 = c.ch_v0;
  spec.h = c.ch_h;
  spec.nu = int(std::lround((c.ch_umax - c.ch_u0) / c.ch_h)) + 1;
  spec.nv = int(std::lround((c.ch_vmax - c.ch_v0) / c.ch_h)) + 1;
  spec.ell = c.l;
  spec.charge = c.charge;
  spec.observer_radii = c.ch_obs_r;

  DataFamily fam;
  fam.kind = DataFamily::Kind::CompactBump;
  fam.amplitude = c.amplitude;
  fam.center = c.center;
  fam.width = c.width;
  const ConeFunction ucone = cone_from_family(fam, spec, bg);
  ConeFunction vcone;
  vcone.phi0.assign(spec.nu, cplx(0.0));
  vcone.phi1.assign(spec.nu, cplx(0.0));
  vcone.chi.assign(spec.nu, cplx(0.0));

  const DiamondSolution sol = evolve_characteristic(ucone, vcone, spec, bg);

  json series_list = json::array();
  std::vector<cplx> monopole_samples;
  for (const auto& obs : sol.observers) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "_r%.4g", obs.r);
    const std::string suffix = buf;
    TimeSeries sm, s0, sp, s00;
    for (size_t i = 0; i < obs.tau.size(); ++i) {
      sm.push(obs.tau[i], obs.psim[i]);
      s0.push(obs.tau[i], obs.psi0[i]);
      sp.push(obs.tau[i], obs.psip[i]);
      s00.push(obs.tau[i], obs.psi00[i]);
      monopole_samples.push_back(obs.psi00[i]);
    }
    for (auto [base, sp2] : {std::pair{std::string("psi_minus"), &sm},
                             {std::string("psi_0"), &s0},
                             {std::string("psi_plus"), &sp},
                             {std::string("psi_00"), &s00}}) {
      apply_floor_flags(*sp2);
      const std::string name = base + suffix;
      emit_series(c, out.dir, name, *sp2, series_list, base != "psi_00");
      out.series[name] = std::move(*sp2);
    }
  }
  if (!monopole_samples.empty()) {
    const ChargeRecord rec = charge(monopole_samples);
    meta["charge"] = json{{"q_e", rec.q_e},
                          {"q_b", rec.q_b},
                          {"max_relative_spread", rec.max_relative_spread},
                          {"samples", rec.samples}};
  }
  if (sol.clipped) meta["clipped_at_tortoise_cutoff"] = true;
  meta["series"] = series_list;
}

} // namespace

RunResult run_one(const RunConfig& c) {
  RunResult out;
  const std::string root = output_root(c);
  out.dir = root + "/" + c.out_name;
  std::filesystem::create_directories(out.dir);
  json meta;
  meta["status"] = "ok";
  meta["scheme"] = c.scheme;
  meta["versions"] = json{{"code", kCodeVersion}};
  meta["config"] = config_echo(c);
  meta["series"] = json::array();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (c.scheme == "hyperboloidal")
      run_hyperboloidal(c, out, meta);
    else
      run_characteristic(c, out, meta);
  } catch (const std::exception& e) {
    meta["status"] = "aborted";
    meta["error"] = e.what();
    out.status = 1;
  }
  meta["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.metadata = meta;
  if (wants(c, "json")) {
    std::ofstream mf(out.dir + "/metadata.json");
    mf << meta.dump(2) << "\n";
  }
  return out;
}

int run_suite(const std::vector<RunConfig>& configs, int parallelism) {
  if (configs.empty()) return 0;
  const int workers = std::max(1, parallelism);
  std::vector<std::future<int>> pending;
  int status = 0;
  size_t next = 0;
  while (next < configs.size() || !pending.empty()) {
    while (int(pending.size()) < workers && next < configs.size()) {
      const RunConfig cfg = configs[next++];
      pending.push_back(std::async(std::launch::async,
                                   [cfg]() { return run_one(cfg).status; }));
    }
    status |= pending.front().get();
    pending.erase(pending.begin());
  }
  return status;
}

std::vector<RunConfig> preset_configs(const std::string& name) {
  if (name != "thm-schw-l1")
    throw std::invalid_argument("unknown preset \"" + name + "\"");
  std::vector<RunConfig> out;
  auto base = []() {
    RunConfig c;
    c.mass = 1.0;
    c.spin = 0.0;
    c.n = 4096;
    c.cfl = 1.4;
    c.cfl_was_set = true;
    c.tau_end = 2000.0;
    c.obs_sigma = {0.2};
    c.obs_scri = true;
    c.out_dir = "out/thm-schw-l1";
    return c;
  };
  {
    RunConfig c = base();
    c.s = -1;
    c.family = "compact-bump";
    c.out_name = "minus_l1_compact";
    out.push_back(c);
  }
  {
    RunConfig c = base();
    c.s = -1;
    c.family = "npc-charged";
    c.amplitude = 0.0;
    c.out_name = "minus_l1_npc";
    out.push_back(c);
  }
  {
    RunConfig c = base();
    c.s = 1;
    c.family = "compact-bump";
    c.out_name = "plus_l1_compact";
    out.push_back(c);
  }
  {
    RunConfig c = base();
    c.s = 1;
    c.family = "npc-charged";
    c.amplitude = 0.0;
    c.out_name = "plus_l1_npc";
    out.push_back(c);
  }
  {
    RunConfig c = base();
    c.scheme = "characteristic";
    c.s = -1;
    c.family = "compact-bump";
    c.center = 14.0;
    c.width = 1.0;
    c.charge = 1.0;
    c.ch_h = 0.125;
    c.ch_u0 = 0.0;
    c.ch_v0 = 4.0;
    c.ch_umax = 700.0;
    c.ch_vmax = 760.0;
    c.ch_obs_r = {10.0};
    c.out_name = "char_maxwell_l1_charged";
    out.push_back(c);
  }
  return out;
}

} // namespace tailsim
