#include "tailsim/observe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tailsim {

void apply_floor_flags(TimeSeries& s) {
  double runmax = 0.0;
  const double factor = 1e3 * 2.220446049250313e-16;
  for (size_t i = 0; i < s.val.size(); ++i) {
    runmax = std::max(runmax, std::abs(s.val[i]));
    if (std::abs(s.val[i]) < factor * runmax) s.flags[i] |= 1;
  }
}

std::vector<double> running_lpi(const TimeSeries& s) {
  const size_t n = s.tau.size();
  std::vector<double> out(n, std::nan(""));
  for (size_t i = 1; i + 1 < n; ++i) {
    if (s.flags[i - 1] || s.flags[i] || s.flags[i + 1]) continue;
    const double a0 = std::abs(s.val[i - 1]), a1 = std::abs(s.val[i + 1]);
    if (a0 <= 0.0 || a1 <= 0.0 || s.tau[i - 1] <= 0.0) continue;
    out[i] = -(std::log(a1) - std::log(a0)) / (std::log(s.tau[i + 1]) - std::log(s.tau[i - 1]));
  }
  return out;
}

double TailFit::lpi_at(double tau) const {
  if (tau_s.empty()) return std::nan("");
  size_t best = 0;
  for (size_t i = 1; i < tau_s.size(); ++i)
    if (std::abs(tau_s[i] - tau) < std::abs(tau_s[best] - tau)) best = i;
  return lpi_s[best];
}

TailFit local_power_index(const TimeSeries& s, const FitOptions& opt) {
  // collect unflagged positive-time samples
  std::vector<double> t;
  std::vector<double> lnf;
  std::vector<size_t> idx;
  for (size_t i = 0; i < s.tau.size(); ++i) {
    if (s.flags[i] || s.tau[i] <= 0.0) continue;
    const double a = std::abs(s.val[i]);
    if (a <= 0.0) continue;
    t.push_back(s.tau[i]);
    lnf.push_back(std::log(a));
    idx.push_back(i);
  }
  TailFit fit;
  if (t.size() < 50) throw std::invalid_argument("tail fit: needs >= 50 unflagged samples");
  double ta = opt.tau_a > 0 ? opt.tau_a : opt.window_lo_frac * t.back();
  double tb = opt.tau_b > 0 ? opt.tau_b : t.back();
  fit.floored = (t.back() < s.tau.back() - 1e-12);

  // advance past the last zero crossing of either part inside the window
  double last_cross = -1.0;
  for (size_t k = 1; k < idx.size(); ++k) {
    const double tt = s.tau[idx[k]];
    if (tt < ta || tt > tb) continue;
    const auto &a = s.val[idx[k - 1]], &b = s.val[idx[k]];
    if (a.real() * b.real() < 0.0 || a.imag() * b.imag() < 0.0) last_cross = tt;
  }
  if (last_cross > 0.0 && last_cross > ta) {
    ta = 1.05 * last_cross;
    fit.ringing_advanced = true;
  }
  if (!(tb / ta >= 2.0)) {
    // keep the required dynamic range by pulling the start earlier if possible
    ta = std::max(t.front(), tb / 2.0);
  }
  if (!(tb > ta) || tb / ta < 2.0 - 1e-9)
    throw std::invalid_argument("tail fit: window must span a factor >= 2 in tau");
  // the window itself only needs enough samples to support the resampling
  int inwin = 0;
  for (double tt : t) inwin += (tt >= ta && tt <= tb);
  if (inwin < 10) throw std::invalid_argument("tail fit: window too sparsely sampled");

  fit.tau_a = ta;
  fit.tau_b = tb;

  // log-spaced resample of ln|f| (linear interpolation in ln tau) and a
  // centered log-derivative
  const int nres = std::max(16, opt.resample);
  std::vector<double> lt(nres), lf(nres);
  const double la = std::log(ta), lb = std::log(tb);
  size_t hint = 0;
  for (int k = 0; k < nres; ++k) {
    lt[k] = la + (lb - la) * k / (nres - 1.0);
    const double tt = std::exp(lt[k]);
    while (hint + 2 < t.size() && t[hint + 1] < tt) ++hint;
    const double t0 = t[hint], t1 = t[hint + 1];
    const double w = (std::log(tt) - std::log(t0)) / (std::log(t1) - std::log(t0));
    lf[k] = (1.0 - w) * lnf[hint] + w * lnf[hint + 1];
  }
  fit.tau_s.resize(nres - 2);
  fit.lpi_s.resize(nres - 2);
  for (int k = 1; k + 1 < nres; ++k) {
    fit.tau_s[k - 1] = std::exp(lt[k]);
    fit.lpi_s[k - 1] = -(lf[k + 1] - lf[k - 1]) / (lt[k + 1] - lt[k - 1]);
  }
  // fitted exponent: median over the last third; residual: max deviation there
  const int third = std::max(4, int(fit.lpi_s.size()) / 3);
  std::vector<double> tailpart(fit.lpi_s.end() - third, fit.lpi_s.end());
  std::nth_element(tailpart.begin(), tailpart.begin() + third / 2, tailpart.end());
  fit.exponent = tailpart[third / 2];
  for (int k = int(fit.lpi_s.size()) - third; k < int(fit.lpi_s.size()); ++k)
    fit.residual = std::max(fit.residual, std::abs(fit.lpi_s[k] - fit.exponent));
  return fit;
}

// ---------------------------------------------------------------------------
// energies

namespace {

struct Pair {
  std::vector<double> f, pi;
};

// rV phi = sigma * G with G = -mu D f + 2 rp pi; returns G
std::vector<double> big_g(const Pair& p, const RadialGrid& g) {
  const int n = g.n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double mu = 1.0 - g.sigma[i];
    out[i] = -mu * fd_d1_at(std::span<const double>(p.f), i, g.dsigma) +
             2.0 * g.bg.r_plus * p.pi[i];
  }
  return out;
}

std::vector<double> y_of(const Pair& p, const RadialGrid& g) {
  const int n = g.n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double s = g.sigma[i];
    out[i] = s * s / g.bg.r_plus *
                 fd_d1_at(std::span<const double>(p.f), i, g.dsigma) +
             2.0 * (1.0 + s) * p.pi[i];
  }
  return out;
}

double simpson(const std::vector<double>& f, double h, int i0, int i1) {
  // composite Simpson on [i0, i1]; trapezoid correction for an odd interval
  double acc = 0.0;
  int i = i0;
  while (i1 - i >= 2) {
    acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    i += 2;
  }
  if (i < i1) acc += 0.5 * h * (f[i] + f[i + 1]);
  return acc;
}

// squared k-norm density of a field pair: |phi|^2 (+ |Y phi|^2 + |rV phi|^2 +
// ladder-weighted |phi|^2 at k = 1)
std::vector<double> density_k(const Pair& p, const RadialGrid& g, int k,
                              const ModeIndex& mode) {
  const int n = g.n;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = p.f[i] * p.f[i];
  if (k >= 1) {
    const auto yv = y_of(p, g);
    const auto gg = big_g(p, g);
    const auto lc = ladder_coefficients(mode.s, mode.l);
    const double ang = lc.alpha_lower * lc.alpha_lower + lc.beta_raise * lc.beta_raise;
    for (int i = 0; i < n; ++i) {
      const double rv = g.sigma[i] * gg[i];
      d[i] += yv[i] * yv[i] + rv * rv + ang * p.f[i] * p.f[i];
    }
  }
  return d;
}

// integral r^{-2} |phi|_k^2 dr over sigma indices [i0, i1]
double field_norm(const Pair& p, const RadialGrid& g, int k, const ModeIndex& mode,
                  int i0, int i1) {
  const auto d = density_k(p, g, k, mode);
  std::vector<double> integ(g.n, 0.0);
  for (int i = i0; i <= i1; ++i) integ[i] = d[i] / g.bg.r_plus;
  return simpson(integ, g.dsigma, i0, i1);
}

// integral r^{p-2} |rV phi|_k^2 dr over sigma indices [i0, i1].  pidot (the
// second time derivative of phi) completes d_tau(rV phi) for the k = 1 set.
double rv_norm(const Pair& p, const std::vector<double>* pidot, const RadialGrid& g,
               int k, const ModeIndex& mode, double pw, int i0, int i1) {
  const int n = g.n;
  const double rp = g.bg.r_plus;
  Pair u;
  u.f.resize(n);
  u.pi.resize(n);
  const auto gg = big_g(p, g);
  const auto gpi = big_g({p.pi, pidot ? *pidot : std::vector<double>(n, 0.0)}, g);
  for (int i = 0; i < n; ++i) {
    u.f[i] = g.sigma[i] * gg[i];
    u.pi[i] = g.sigma[i] * gpi[i]; // rV pi
  }
  const auto d = density_k(u, g, k, mode);
  std::vector<double> integ(n, 0.0);
  for (int i = std::max(i0, 1); i <= i1; ++i) {
    const double s = g.sigma[i];
    integ[i] = std::pow(rp, pw - 1.0) * std::pow(s, -pw) * d[i];
  }
  if (i0 == 0) {
    // scri node: sigma^{2-p} |G|^2-type limit; fill by extrapolation from the
    // first interior nodes (open node for p > 2)
    integ[0] = (pw > 2.0) ? 0.0 : (3.0 * integ[1] - 3.0 * integ[2] + integ[3]);
    if (!std::isfinite(integ[0])) integ[0] = 0.0;
  }
  return simpson(integ, g.dsigma, i0, i1);
}

Pair channel_pair(const HyperState::FieldData& fd, int ch) {
  return Pair{fd.f[ch], fd.pi[ch]};
}

Pair divide_pair_by_mu(const Pair& p, const RadialGrid& g) {
  return Pair{divide_by_mu(p.f, g), divide_by_mu(p.pi, g)};
}

} // namespace

double energy_F(const HyperState& state, const EnergySpec& spec,
                const SystemOperators& sys) {
  if (spec.k < 0 || spec.k > 1)
    throw std::invalid_argument("energy: regularity order limited to k <= 1");
  const bool top = spec.which == EnergySelector::PhiTildeTop;
  if (!top && (spec.p < 0.0 || spec.p > 2.0))
    throw std::invalid_argument("energy: weight p outside [0, 2] for field selectors");
  if (top && (spec.p < 0.0 || spec.p >= 5.0))
    throw std::invalid_argument("energy: weight p outside [0, 5) for the top selector");
  const RadialGrid& g = *sys.grid;
  const ModeIndex mode = state.mode;
  double total = 0.0;
  const int i1 = g.n - 1;
  for (int ch = 0; ch < state.channels; ++ch) {
    switch (spec.which) {
      case EnergySelector::PsiPlusField: {
        const Pair p = channel_pair(state.of(FieldId::PsiPlus), ch);
        const auto acc = second_tau_derivative(
            sys.ops[sys.index_of(FieldId::PsiPlus)], p.f, p.pi, nullptr);
        total += field_norm(p, g, spec.k, mode, 0, i1);
        total += rv_norm(p, &acc, g, spec.k, mode, spec.p, 0, i1);
        break;
      }
      case EnergySelector::PsiMinusPair: {
        const Pair p0raw = channel_pair(state.of(FieldId::PhiMinus0), ch);
        const Pair psi0 = divide_pair_by_mu(p0raw, g);
        // d_tau^2 of the radiation scalar = (d_tau^2 of the base) / mu
        const auto acc_raw = second_tau_derivative(
            sys.ops[sys.index_of(FieldId::PhiMinus0)], p0raw.f, p0raw.pi,
            state.of(FieldId::PhiMinus1).f[ch].data());
        const auto acc0 = divide_by_mu(acc_raw, g);
        // second radiation scalar r^2 V of the first: rp * G
        Pair psi1;
        psi1.f.resize(g.n);
        psi1.pi.resize(g.n);
        const auto g0 = big_g(psi0, g);
        const auto g0pi = big_g({psi0.pi, acc0}, g);
        for (int i = 0; i < g.n; ++i) {
          psi1.f[i] = g.bg.r_plus * g0[i];
          psi1.pi[i] = g.bg.r_plus * g0pi[i];
        }
        total += field_norm(psi0, g, spec.k, mode, 0, i1);
        total += rv_norm(psi0, &acc0, g, spec.k, mode, spec.p, 0, i1);
        total += field_norm(psi1, g, spec.k, mode, 0, i1);
        total += rv_norm(psi1, nullptr, g, spec.k, mode, spec.p, 0, i1);
        break;
      }
      case EnergySelector::PhiTildeTop: {
        // top decoupled scalar; restricted to r >= 3M as in its definition
        Pair topp;
        if (sys.kind == SystemKind::SpinPlus) {
          if (mode.l != 1)
            throw std::invalid_argument("energy: top selector implemented for the "
                                        "first multipole of the spin +1 run");
          topp = divide_pair_by_mu(channel_pair(state.of(FieldId::PsiPlus), ch), g);
        } else {
          topp = divide_pair_by_mu(channel_pair(state.of(FieldId::PhiMinus2W), ch), g);
        }
        int i3m = 0;
        while (i3m < g.n - 1 && g.sigma[i3m + 1] <= 2.0 / 3.0 + 1e-12) ++i3m;
        total += field_norm(topp, g, spec.k, mode, 0, i3m);
        total += rv_norm(topp, nullptr, g, spec.k, mode, spec.p, 0, i3m);
        break;
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Newman-Penrose constants

double NPConstantRecord::relative_drift(double tau_lo, double tau_hi) const {
  std::complex<double> ref(0.0, 0.0);
  double scale = 0.0, drift = 0.0;
  int count = 0;
  for (size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < tau_lo || tau[i] > tau_hi) continue;
    if (count == 0) ref = value[i];
    ++count;
    drift = std::max(drift, std::abs(value[i] - ref));
    scale = std::max(scale, std::abs(value[i]));
  }
  return count > 0 && scale > 0.0 ? drift / scale : 0.0;
}

std::complex<double> np_constant(const HyperState& state, int index, int spin,
                                 const SystemOperators& sys,
                                 const HierarchySpec& hspec, bool* flagged) {
  if (index < 1) throw std::invalid_argument("np_constant: index must be >= 1");
  const RadialGrid& g = *sys.grid;
  const int n = g.n;
  const double rp = g.bg.r_plus;
  const double h = g.dsigma;
  if (flagged) *flagged = false;

  // chain of hierarchy levels above the base evolved scalar
  std::vector<Pair> chain;
  if (spin > 0) {
    if (sys.kind != SystemKind::SpinPlus)
      throw std::invalid_argument("np_constant: spin +1 needs the spin +1 run");
    chain.push_back(divide_pair_by_mu(
        Pair{state.of(FieldId::PsiPlus).f[0], state.of(FieldId::PsiPlus).pi[0]}, g));
  } else {
    if (sys.kind != SystemKind::SpinMinusTriple)
      throw std::invalid_argument("np_constant: spin -1 needs the spin -1 run");
    chain.push_back(divide_pair_by_mu(
        Pair{state.of(FieldId::PhiMinus2W).f[0], state.of(FieldId::PhiMinus2W).pi[0]}, g));
  }
  const int levels_needed = index - 1; // extra weighted derivatives above base
  for (int lev = 0; lev < levels_needed; ++lev) {
    const Pair& prev = chain.back();
    Pair next;
    next.f.resize(n);
    next.pi.resize(n);
    // value: curlyVR(prev) away from the horizon (used near scri only)
    for (int i = 0; i < n; ++i) {
      const double mu = 1.0 - g.sigma[i];
      const double df = fd_d1_at(std::span<const double>(prev.f), i, h);
      next.f[i] = -rp * df + (i < n - 1 ? 2.0 * rp * rp * prev.pi[i] / mu : 0.0);
      // time derivative: needs d_tau^2 of prev; approximate with the top
      // operator of the system (same plus-type radial structure)
      const ModeOperator& op = sys.ops[sys.kind == SystemKind::SpinPlus
                                           ? sys.index_of(FieldId::PsiPlus)
                                           : sys.index_of(FieldId::PhiMinus2W)];
      const double dpi = fd_d1_at(std::span<const double>(prev.pi), i, h);
      const double d2f = fd_d2_at(std::span<const double>(prev.f), i, h);
      const double acc = op.q_dpi[i] * dpi + op.q_d2f[i] * d2f + op.q_df[i] * df +
                         op.q_pi[i] * prev.pi[i] + op.q_f[i] * prev.f[i];
      next.pi[i] = -rp * dpi + (i < n - 1 ? 2.0 * rp * rp * acc / mu : 0.0);
    }
    next.f[n - 1] = 3.0 * next.f[n - 2] - 3.0 * next.f[n - 3] + next.f[n - 4];
    next.pi[n - 1] = 3.0 * next.pi[n - 2] - 3.0 * next.pi[n - 3] + next.pi[n - 4];
    chain.push_back(std::move(next));
  }

  // tilde combination of the chain, then one more weighted derivative at scri
  std::vector<std::vector<double>> fs, ps;
  for (auto& c : chain) {
    fs.push_back(c.f);
    ps.push_back(c.pi);
  }
  const auto tf = tilde_transform(fs, hspec, g.bg.mass);
  const auto tp = tilde_transform(ps, hspec, g.bg.mass);
  const auto& topf = tf.back();
  const auto& topp = tp.back();
  auto curly_at = [&](int i) {
    const double mu = 1.0 - g.sigma[i];
    return -rp * fd_d1_at(std::span<const double>(topf), i, h) +
           2.0 * rp * rp * topp[i] / mu;
  };
  const double v0 = curly_at(0);
  const double v1 = curly_at(1), v2 = curly_at(2), v3 = curly_at(3);
  // quadratic extrapolation of the interior samples to sigma = 0 (order 2)
  const double extrap = 3.0 * v1 - 3.0 * v2 + v3;
  double value = std::isfinite(v0) ? v0 : extrap;
  if (!std::isfinite(value)) {
    if (flagged) *flagged = true;
    value = std::nan("");
  } else if (std::isfinite(extrap) && std::isfinite(v0)) {
    // blend: the node value is already the limit; keep it, use the
    // extrapolant as a consistency guard
    if (std::abs(extrap - v0) > 0.5 * (std::abs(v0) + 1e-12) && flagged) *flagged = true;
  }
  // second channel (imaginary part) when present
  double imag = 0.0;
  if (state.channels == 2) {
    // rebuild for channel 1 cheaply: same chain logic on channel 1
    HyperState tmp = state;
    for (auto& fd : tmp.fields) {
      fd.f[0] = fd.f[1];
      fd.pi[0] = fd.pi[1];
    }
    tmp.channels = 1;
    bool fl2 = false;
    imag = np_constant(tmp, index, spin, sys, hspec, &fl2).real();
    if (fl2 && flagged) *flagged = true;
  }
  return {value, imag};
}

// ---------------------------------------------------------------------------
// charges

ChargeRecord charge(const std::vector<std::complex<double>>& monopole_coeffs) {
  ChargeRecord rec;
  rec.samples = int(monopole_coeffs.size());
  if (monopole_coeffs.empty()) return rec;
  const double root4pi = std::sqrt(4.0 * std::numbers::pi);
  std::complex<double> mean(0.0, 0.0);
  for (const auto& c : monopole_coeffs) mean += c;
  mean /= double(monopole_coeffs.size());
  const std::complex<double> q = mean / root4pi;
  rec.q_e = q.real();
  rec.q_b = q.imag();
  const double scale = std::abs(q);
  for (const auto& c : monopole_coeffs) {
    const double dev = std::abs(c / root4pi - q);
    rec.max_relative_spread = std::max(rec.max_relative_spread,
                                       scale > 0.0 ? dev / scale : dev);
  }
  return rec;
}

TimeSeries stationary_subtraction(const TimeSeries& psi0_values,
                                  std::complex<double> q, double r) {
  TimeSeries out;
  out.tau = psi0_values.tau;
  out.flags = psi0_values.flags;
  out.val.resize(psi0_values.val.size());
  for (size_t i = 0; i < out.val.size(); ++i)
    out.val[i] = (psi0_values.val[i] - q) / (r * r);
  return out;
}

} // namespace tailsim
