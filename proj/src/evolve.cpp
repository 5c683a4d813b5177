#include "tailsim/evolve.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tailsim {

const char* field_name(FieldId id) {
  switch (id) {
    case FieldId::PsiPlus: return "psi_plus";
    case FieldId::PhiMinus0: return "phi_minus0";
    case FieldId::PhiMinus1: return "phi_minus1";
    case FieldId::PhiMinus2W: return "phi_minus2w";
  }
  return "?";
}

int SystemOperators::index_of(FieldId id) const {
  for (size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return int(i);
  throw std::invalid_argument("system: unknown field");
}

int HyperState::index_of(FieldId id) const {
  for (size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return int(i);
  throw std::invalid_argument("state: unknown field");
}

SystemOperators make_system(const Background& bg, const ModeIndex& mode,
                            std::shared_ptr<const RadialGrid> grid, SystemKind kind) {
  validate_mode(mode);
  SystemOperators sys;
  sys.bg = bg;
  sys.gauge = height_gauge(bg);
  sys.grid = grid;
  sys.mode = mode;
  sys.kind = kind;
  if (kind == SystemKind::SpinPlus) {
    sys.ids = {FieldId::PsiPlus};
    sys.ops.push_back(assemble_plus(bg, mode.l, sys.gauge, grid, OperatorForm::Hyperboloidal));
    sys.source_of = {-1};
  } else {
    sys.ids = {FieldId::PhiMinus0, FieldId::PhiMinus1, FieldId::PhiMinus2W};
    MinusSystem ms = assemble_minus_system(bg, mode.l, sys.gauge, grid,
                                           OperatorForm::Hyperboloidal);
    sys.ops.push_back(std::move(ms.op0));
    sys.ops.push_back(std::move(ms.op1));
    sys.ops.push_back(std::move(ms.op2));
    sys.source_of = {1, -1, -1};
  }
  return sys;
}

// (1-x^2)^8: compact support, C^7 across the edges, mild derivatives; plenty
// of regularity for the 4th-order stencils.
double bump_c_inf(double x) {
  const double om = 1.0 - x * x;
  if (om <= 0.0) return 0.0;
  const double p2 = om * om, p4 = p2 * p2;
  return p4 * p4;
}

double bump_c_inf_d1(double x) {
  const double om = 1.0 - x * x;
  if (om <= 0.0) return 0.0;
  const double p2 = om * om, p4 = p2 * p2;
  return -16.0 * x * p4 * p2 * om;
}

double bump_c_inf_d2(double x) {
  const double om = 1.0 - x * x;
  if (om <= 0.0) return 0.0;
  const double p2 = om * om, p4 = p2 * p2;
  return (-16.0 * om + 224.0 * x * x) * p4 * p2;
}

std::vector<double> divide_by_mu(std::span<const double> f, const RadialGrid& grid) {
  const int n = grid.n;
  std::vector<double> out(n);
  for (int i = 0; i < n - 1; ++i) out[i] = f[i] / (1.0 - grid.sigma[i]);
  out[n - 1] = 3.0 * out[n - 2] - 3.0 * out[n - 3] + out[n - 4];
  return out;
}

std::vector<double> second_tau_derivative(const ModeOperator& op,
                                          std::span<const double> f,
                                          std::span<const double> pi,
                                          const double* src) {
  const int n = op.grid->n;
  const double h = op.grid->dsigma;
  std::vector<double> acc(n);
  for (int i = 0; i < n; ++i) {
    const double dpi = fd_d1_at(pi, i, h);
    const double df = fd_d1_at(f, i, h);
    const double d2f = fd_d2_at(f, i, h);
    double v = op.q_dpi[i] * dpi + op.q_d2f[i] * d2f + op.q_df[i] * df +
               op.q_pi[i] * pi[i] + op.q_f[i] * f[i];
    if (src) v += op.q_src[i] * src[i];
    acc[i] = v;
  }
  return acc;
}

namespace {

void require_support_margin(const RadialGrid& grid, double r_lo, double r_hi) {
  // keep data supports away from the scri and horizon nodes
  const double s_hi = grid.bg.r_plus / r_lo; // inner edge in sigma
  const double s_lo = grid.bg.r_plus / r_hi; // outer edge in sigma
  if (r_lo <= grid.bg.r_plus || s_hi > 1.0 - 3.0 * grid.dsigma)
    throw std::invalid_argument("initial data: support touches the horizon node");
  if (s_lo < 3.0 * grid.dsigma)
    throw std::invalid_argument("initial data: support touches the scri node");
}

double smooth_switch(double y) {
  // 0 for y <= 0, 1 for y >= 1, C-infinity monotone in between
  auto fexp = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = fexp(y), b = fexp(1.0 - y);
  return a / (a + b);
}

} // namespace

HyperState make_initial_data(const DataFamily& family, const ModeIndex& mode,
                             const SystemOperators& sys) {
  validate_mode(mode);
  const RadialGrid& grid = *sys.grid;
  const int n = grid.n;
  const double rp = grid.bg.r_plus;

  if (family.kind == DataFamily::Kind::MonopoleCharge)
    throw std::invalid_argument(
        "initial data: the monopole charge family targets the characteristic "
        "middle component, not a hyperboloidal run");

  // seed profile for the base evolved field (and zero d_tau profile)
  std::vector<double> seed(n, 0.0);
  if (family.amplitude != 0.0 && family.kind == DataFamily::Kind::CompactBump) {
    require_support_margin(grid, family.center - 4.0 * family.width,
                           family.center + 4.0 * family.width);
    for (int i = 1; i < n; ++i) {
      const double r = rp / grid.sigma[i];
      seed[i] = family.amplitude * bump_c_inf((r - family.center) / (4.0 * family.width));
    }
  } else if (family.kind == DataFamily::Kind::NpcCharged) {
    const double s_cut = rp / family.cutoff;
    if (s_cut < 6.0 * grid.dsigma)
      throw std::invalid_argument("initial data: cutoff too far out for this grid");
    for (int i = 0; i < n; ++i) {
      const double s = grid.sigma[i];
      // switch is 1 well outside the cutoff radius and 0 inside it
      const double sw = smooth_switch((s_cut - s) / (0.5 * s_cut));
      double tail = 0.0;
      if (sys.kind == SystemKind::SpinMinusTriple) {
        // base scalar ~ -(N/6)/r^3 so the second hierarchy scalar ~ -N/r
        tail = -(family.n_inf / 6.0) * std::pow(s / rp, 3);
      } else {
        // radiation field ~ mu * (-N/r)
        tail = -(1.0 - s) * family.n_inf * s / rp;
      }
      seed[i] = sw * tail;
      if (family.amplitude != 0.0) {
        const double r = s > 0.0 ? rp / s : 0.0;
        if (s > 0.0)
          seed[i] += family.amplitude *
                     bump_c_inf((r - family.center) / (4.0 * family.width));
      }
    }
    if (family.amplitude != 0.0)
      require_support_margin(grid, family.center - 4.0 * family.width,
                             family.center + 4.0 * family.width);
  }

  HyperState st;
  st.tau = 0.0;
  st.mode = mode;
  st.channels = 1;
  st.ids = sys.ids;
  st.fields.resize(sys.ids.size());
  for (auto& fd : st.fields) {
    fd.f[0].assign(n, 0.0);
    fd.pi[0].assign(n, 0.0);
  }

  if (sys.kind == SystemKind::SpinPlus) {
    st.of(FieldId::PsiPlus).f[0] = seed;
    return st;
  }

  // spin -1 triple: seed the base scalar, then build the hierarchy partners
  // with the discrete weighted outgoing derivative (time-symmetric base)
  auto& f0 = st.of(FieldId::PhiMinus0);
  f0.f[0] = seed;
  const double h = grid.dsigma;

  std::vector<double> phi1(n), pi1(n), w2(n), piw(n);
  for (int i = 0; i < n; ++i) phi1[i] = -rp * fd_d1_at(f0.f[0], i, h);
  // d_tau phi1 = curlyVR applied to (pi0 = 0, d_tau pi0 = acc0)
  const std::vector<double> acc0 =
      second_tau_derivative(sys.ops[0], f0.f[0], f0.pi[0], phi1.data());
  for (int i = 0; i < n - 1; ++i)
    pi1[i] = 2.0 * rp * rp * acc0[i] / (1.0 - grid.sigma[i]);
  pi1[n - 1] = (acc0[n - 1] == 0.0) ? 0.0
                                    : 3.0 * pi1[n - 2] - 3.0 * pi1[n - 3] + pi1[n - 4];
  // second scalar, mu-weighted: W = -mu rp D phi1 + 2 rp^2 pi1
  for (int i = 0; i < n; ++i) {
    const double mu = 1.0 - grid.sigma[i];
    w2[i] = -mu * rp * fd_d1_at(phi1, i, h) + 2.0 * rp * rp * pi1[i];
  }
  const std::vector<double> acc1 = second_tau_derivative(sys.ops[1], phi1, pi1, nullptr);
  for (int i = 0; i < n; ++i) {
    const double mu = 1.0 - grid.sigma[i];
    piw[i] = -mu * rp * fd_d1_at(pi1, i, h) + 2.0 * rp * rp * acc1[i];
  }

  st.of(FieldId::PhiMinus1).f[0] = std::move(phi1);
  st.of(FieldId::PhiMinus1).pi[0] = std::move(pi1);
  st.of(FieldId::PhiMinus2W).f[0] = std::move(w2);
  st.of(FieldId::PhiMinus2W).pi[0] = std::move(piw);
  return st;
}

// ---------------------------------------------------------------------------
// stepping core

namespace {

template <bool HasSrc>
inline double kpi_at(const ModeOperator& op, const double* f, const double* pi,
                     const double* src, int i, int n, double h) {
  std::span<const double> fs(f, size_t(n)), ps(pi, size_t(n));
  double v = op.q_dpi[i] * fd_d1_at(ps, i, h) + op.q_d2f[i] * fd_d2_at(fs, i, h) +
             op.q_df[i] * fd_d1_at(fs, i, h) + op.q_pi[i] * pi[i] + op.q_f[i] * f[i];
  if constexpr (HasSrc) v += op.q_src[i] * src[i];
  return v;
}

// One fused RK stage for one field/channel: evaluates the right-hand side,
// adds the weighted increment to the accumulators, and writes the next stage
// input.  first: accumulators are initialized from (f0, pi0);
// last: no next-stage input is produced.
template <bool HasSrc, bool First, bool Last>
void stage_kernel(const ModeOperator& op, const double* f, const double* pi,
                  const double* src, const double* f0, const double* pi0,
                  double* __restrict facc, double* __restrict piacc,
                  double* __restrict fout, double* __restrict piout,
                  int n, double h, double wdt, double cdt) {
  const double inv1 = 1.0 / (12.0 * h);
  const double inv2 = 1.0 / (12.0 * h * h);
  const double* __restrict qdpi = op.q_dpi.data();
  const double* __restrict qd2f = op.q_d2f.data();
  const double* __restrict qdf = op.q_df.data();
  const double* __restrict qpi = op.q_pi.data();
  const double* __restrict qf = op.q_f.data();
  const double* __restrict qsrc = op.q_src.data();
  for (int i = 2; i <= n - 3; ++i) {
    const double dpi = (pi[i - 2] - 8.0 * pi[i - 1] + 8.0 * pi[i + 1] - pi[i + 2]) * inv1;
    const double df = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv1;
    const double d2f =
        (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * inv2;
    double kp = qdpi[i] * dpi + qd2f[i] * d2f + qdf[i] * df + qpi[i] * pi[i] + qf[i] * f[i];
    if constexpr (HasSrc) kp += qsrc[i] * src[i];
    const double kf = pi[i];
    if constexpr (First) {
      facc[i] = f0[i] + wdt * kf;
      piacc[i] = pi0[i] + wdt * kp;
    } else {
      facc[i] += wdt * kf;
      piacc[i] += wdt * kp;
    }
    if constexpr (!Last) {
      fout[i] = f0[i] + cdt * kf;
      piout[i] = pi0[i] + cdt * kp;
    }
  }
  for (int i : {0, 1, n - 2, n - 1}) {
    const double kp = kpi_at<HasSrc>(op, f, pi, src, i, n, h);
    const double kf = pi[i];
    if constexpr (First) {
      facc[i] = f0[i] + wdt * kf;
      piacc[i] = pi0[i] + wdt * kp;
    } else {
      facc[i] += wdt * kf;
      piacc[i] += wdt * kp;
    }
    if constexpr (!Last) {
      fout[i] = f0[i] + cdt * kf;
      piout[i] = pi0[i] + cdt * kp;
    }
  }
}

template <bool HasSrc>
void stage_dispatch(const ModeOperator& op, int stage, const double* f,
                    const double* pi, const double* src, const double* f0,
                    const double* pi0, double* facc, double* piacc, double* fout,
                    double* piout, int n, double h, double wdt, double cdt) {
  if (stage == 0)
    stage_kernel<HasSrc, true, false>(op, f, pi, src, f0, pi0, facc, piacc, fout,
                                      piout, n, h, wdt, cdt);
  else if (stage == 3)
    stage_kernel<HasSrc, false, true>(op, f, pi, src, f0, pi0, facc, piacc, fout,
                                      piout, n, h, wdt, cdt);
  else
    stage_kernel<HasSrc, false, false>(op, f, pi, src, f0, pi0, facc, piacc, fout,
                                       piout, n, h, wdt, cdt);
}

} // namespace

HyperEvolver::HyperEvolver(const SystemOperators& sys, HyperState init, double cfl,
                           double dissipation)
    : sys_(&sys), state_(std::move(init)), dissipation_(dissipation) {
  const RadialGrid& grid = *sys.grid;
  if (!(cfl > 0.0)) throw std::invalid_argument("evolver: cfl must be positive");
  dt_ = cfl * grid.dsigma / max_char_speed(sys.bg);
  const int n = grid.n;
  work_.resize(state_.fields.size());
  for (auto& wpair : work_)
    for (auto& w : wpair) {
      w.fa.resize(n); w.pia.resize(n); w.fb.resize(n); w.pib.resize(n);
      w.facc.resize(n); w.piacc.resize(n);
    }
  check_outflow();
}

void HyperEvolver::check_outflow() const {
  for (const auto& op : sys_->ops) {
    const int n = sys_->grid->n;
    for (int i : {0, n - 1}) {
      const double a = op.a_tt[i], b = op.a_ts[i], c = op.a_ss[i];
      const double disc = std::sqrt(b * b - 4.0 * a * c);
      const double c1 = (b - disc) / (2.0 * a);
      const double c2 = (b + disc) / (2.0 * a);
      const bool ok = (i == 0) ? (c1 <= 1e-14 && c2 <= 1e-14)
                               : (c1 >= -1e-14 && c2 >= -1e-14);
      if (!ok) throw std::runtime_error("evolver: boundary characteristics point inward");
    }
  }
}

void HyperEvolver::check_finite() const {
  for (size_t fi = 0; fi < state_.fields.size(); ++fi)
    for (int ch = 0; ch < state_.channels; ++ch) {
      const auto& fd = state_.fields[fi];
      for (size_t i = 0; i < fd.f[ch].size(); ++i) {
        if (std::isfinite(fd.f[ch][i]) && std::isfinite(fd.pi[ch][i])) continue;
        std::fprintf(stderr,
                     "evolver: non-finite %s at tau=%.6f node %zu (sigma=%.6f); "
                     "slice dump follows\n",
                     field_name(state_.ids[fi]), state_.tau, i,
                     sys_->grid->sigma[i]);
        for (size_t k = 0; k < fd.f[ch].size(); k += std::max<size_t>(1, fd.f[ch].size() / 64))
          std::fprintf(stderr, "  sigma=%.5f f=%.6e pi=%.6e\n", sys_->grid->sigma[k],
                       fd.f[ch][k], fd.pi[ch][k]);
        throw std::runtime_error("evolver: non-finite field value");
      }
    }
}

void HyperEvolver::step() {
  const int n = sys_->grid->n;
  const double h = sys_->grid->dsigma;
  const int nf = int(state_.fields.size());
  const int nch = state_.channels;
  const double dt = dt_;

  static constexpr double kC[4] = {0.5, 0.5, 1.0, 0.0};
  static constexpr double kW[4] = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};

  // incoming state arrays stay untouched (they are y0); stage inputs
  // ping-pong between the a and b workspace buffers
  for (int stage = 0; stage < 4; ++stage) {
    const bool odd = (stage % 2 == 1);
    for (int fi = 0; fi < nf; ++fi) {
      const ModeOperator& op = sys_->ops[fi];
      const int si = sys_->source_of[fi];
      for (int ch = 0; ch < nch; ++ch) {
        auto& w = work_[fi][ch];
        const auto& fd = state_.fields[fi];
        const double* fin = stage == 0 ? fd.f[ch].data() : (odd ? w.fb.data() : w.fa.data());
        const double* piin = stage == 0 ? fd.pi[ch].data() : (odd ? w.pib.data() : w.pia.data());
        double* fout = odd ? w.fa.data() : w.fb.data();
        double* piout = odd ? w.pia.data() : w.pib.data();
        const double* src = nullptr;
        if (si >= 0) {
          const auto& ws = work_[si][ch];
          src = stage == 0 ? state_.fields[si].f[ch].data()
                           : (odd ? ws.fb.data() : ws.fa.data());
        }
        if (si >= 0)
          stage_dispatch<true>(op, stage, fin, piin, src, fd.f[ch].data(),
                               fd.pi[ch].data(), w.facc.data(), w.piacc.data(), fout,
                               piout, n, h, kW[stage] * dt, kC[stage] * dt);
        else
          stage_dispatch<false>(op, stage, fin, piin, nullptr, fd.f[ch].data(),
                                fd.pi[ch].data(), w.facc.data(), w.piacc.data(), fout,
                                piout, n, h, kW[stage] * dt, kC[stage] * dt);
      }
    }
  }

  for (int fi = 0; fi < nf; ++fi)
    for (int ch = 0; ch < nch; ++ch) {
      auto& w = work_[fi][ch];
      auto& fd = state_.fields[fi];
      fd.f[ch].swap(w.facc);
      fd.pi[ch].swap(w.piacc);
      if (dissipation_ > 0.0) {
        ko_filter(fd.f[ch], dissipation_, scratch_);
        ko_filter(fd.pi[ch], dissipation_, scratch_);
      }
    }
  state_.tau += dt;

  if (++steps_since_check_ >= 512) {
    steps_since_check_ = 0;
    check_finite();
    check_outflow();
  }
}

void HyperEvolver::run_until(double tau_end, const StepHooks& hooks) {
  while (state_.tau < tau_end - 1e-12) {
    if (hooks.pre_step) hooks.pre_step(state_.tau, state_);
    step();
    if (hooks.post_step) hooks.post_step(state_.tau, state_);
  }
  check_finite();
}

void step_hyperboloidal(HyperState& state, const SystemOperators& sys, double dt,
                        double dissipation) {
  const double limit = sys.grid->dsigma / max_char_speed(sys.bg);
  if (dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument("step: dt exceeds the CFL limit dsigma / max speed");
  HyperEvolver ev(sys, std::move(state), dt / limit, dissipation);
  ev.step();
  state = ev.state();
}

ConstraintDrift constraint_drift(const HyperState& state, const SystemOperators& sys) {
  if (sys.kind != SystemKind::SpinMinusTriple)
    throw std::invalid_argument("constraint_drift: needs the spin -1 system");
  const RadialGrid& grid = *sys.grid;
  const int n = grid.n;
  const double rp = grid.bg.r_plus;
  const double h = grid.dsigma;
  ConstraintDrift out;
  for (int ch = 0; ch < state.channels; ++ch) {
    const auto& f0 = state.of(FieldId::PhiMinus0);
    const auto& f1 = state.of(FieldId::PhiMinus1);
    const auto& fw = state.of(FieldId::PhiMinus2W);
    double a0 = 0.0, s0 = 0.0, a1 = 0.0, s1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mu = 1.0 - grid.sigma[i];
      if (i < n - 1) {
        const double vr0 = -rp * fd_d1_at(std::span<const double>(f0.f[ch]), i, h) +
                           2.0 * rp * rp * f0.pi[ch][i] / mu;
        const double c0 = f1.f[ch][i] - vr0;
        a0 += c0 * c0;
        s0 += f1.f[ch][i] * f1.f[ch][i];
      }
      const double vr1 = -mu * rp * fd_d1_at(std::span<const double>(f1.f[ch]), i, h) +
                         2.0 * rp * rp * f1.pi[ch][i];
      const double c1 = fw.f[ch][i] - vr1;
      a1 += c1 * c1;
      s1 += fw.f[ch][i] * fw.f[ch][i];
    }
    out.c0_abs += std::sqrt(a0 * h);
    out.c1_abs += std::sqrt(a1 * h);
    out.c0_rel += std::sqrt(a0 / (s0 + 1e-300));
    out.c1_rel += std::sqrt(a1 / (s1 + 1e-300));
  }
  return out;
}

} // namespace tailsim
