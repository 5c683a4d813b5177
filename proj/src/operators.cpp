#include "tailsim/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace tailsim {

RadialGrid make_radial_grid(const Background& bg, int n) {
  if (n < 64) throw std::invalid_argument("radial grid: need at least 64 nodes");
  RadialGrid g;
  g.bg = bg;
  g.n = n;
  g.dsigma = 1.0 / (n - 1);
  g.sigma.resize(n);
  for (int i = 0; i < n; ++i) g.sigma[i] = double(i) / (n - 1);
  g.sigma.front() = 0.0;
  g.sigma.back() = 1.0;
  return g;
}

namespace {

// 4th-order one-sided first-derivative closures (rows i = 0, 1 from the edge).
constexpr double kD1E0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};   // /# 12 h
constexpr double kD1E1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};     // / 12 h
// 4th-order one-sided second-derivative closures (6 points).
constexpr double kD2E0[6] = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0}; // / 12 h^2
constexpr double kD2E1[6] = {10.0, -15.0, -4.0, 14.0, -6.0, 1.0};       // / 12 h^2

} // namespace

double fd_d1_at(std::span<const double> f, int i, double h) {
  const int n = int(f.size());
  const double inv = 1.0 / (12.0 * h);
  if (i >= 2 && i <= n - 3)
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
  if (i == 0)
    return (kD1E0[0] * f[0] + kD1E0[1] * f[1] + kD1E0[2] * f[2] + kD1E0[3] * f[3] +
            kD1E0[4] * f[4]) * inv;
  if (i == 1)
    return (kD1E1[0] * f[0] + kD1E1[1] * f[1] + kD1E1[2] * f[2] + kD1E1[3] * f[3] +
            kD1E1[4] * f[4]) * inv;
  if (i == n - 1)
    return -(kD1E0[0] * f[n - 1] + kD1E0[1] * f[n - 2] + kD1E0[2] * f[n - 3] +
             kD1E0[3] * f[n - 4] + kD1E0[4] * f[n - 5]) * inv;
  // i == n - 2
  return -(kD1E1[0] * f[n - 1] + kD1E1[1] * f[n - 2] + kD1E1[2] * f[n - 3] +
           kD1E1[3] * f[n - 4] + kD1E1[4] * f[n - 5]) * inv;
}

double fd_d2_at(std::span<const double> f, int i, double h) {
  const int n = int(f.size());
  const double inv = 1.0 / (12.0 * h * h);
  if (i >= 2 && i <= n - 3)
    return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * inv;
  if (i == 0)
    return (kD2E0[0] * f[0] + kD2E0[1] * f[1] + kD2E0[2] * f[2] + kD2E0[3] * f[3] +
            kD2E0[4] * f[4] + kD2E0[5] * f[5]) * inv;
  if (i == 1)
    return (kD2E1[0] * f[0] + kD2E1[1] * f[1] + kD2E1[2] * f[2] + kD2E1[3] * f[3] +
            kD2E1[4] * f[4] + kD2E1[5] * f[5]) * inv;
  if (i == n - 1)
    return (kD2E0[0] * f[n - 1] + kD2E0[1] * f[n - 2] + kD2E0[2] * f[n - 3] +
            kD2E0[3] * f[n - 4] + kD2E0[4] * f[n - 5] + kD2E0[5] * f[n - 6]) * inv;
  // i == n - 2
  return (kD2E1[0] * f[n - 1] + kD2E1[1] * f[n - 2] + kD2E1[2] * f[n - 3] +
          kD2E1[3] * f[n - 4] + kD2E1[4] * f[n - 5] + kD2E1[5] * f[n - 6]) * inv;
}

void fd_d1(std::span<const double> f, std::span<double> out, double h) {
  const int n = int(f.size());
  const double inv = 1.0 / (12.0 * h);
  out[0] = fd_d1_at(f, 0, h);
  out[1] = fd_d1_at(f, 1, h);
  for (int i = 2; i <= n - 3; ++i)
    out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
  out[n - 2] = fd_d1_at(f, n - 2, h);
  out[n - 1] = fd_d1_at(f, n - 1, h);
}

void fd_d2(std::span<const double> f, std::span<double> out, double h) {
  const int n = int(f.size());
  const double inv = 1.0 / (12.0 * h * h);
  out[0] = fd_d2_at(f, 0, h);
  out[1] = fd_d2_at(f, 1, h);
  for (int i = 2; i <= n - 3; ++i)
    out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * inv;
  out[n - 2] = fd_d2_at(f, n - 2, h);
  out[n - 1] = fd_d2_at(f, n - 1, h);
}

void ko_filter(std::span<double> f, double eps, std::vector<double>& scratch) {
  const int n = int(f.size());
  if (eps == 0.0 || n < 7) return;
  scratch.assign(f.begin(), f.end());
  const double* u = scratch.data();
  const double c = eps / 64.0;
  for (int i = 3; i <= n - 4; ++i) {
    f[i] += c * (u[i - 3] - 6.0 * u[i - 2] + 15.0 * u[i - 1] - 20.0 * u[i] +
                 15.0 * u[i + 1] - 6.0 * u[i + 2] + u[i + 3]);
  }
}

double char_speed_out(const Background& bg, double sigma) {
  return -(1.0 - sigma) / (2.0 * bg.r_plus);
}
double char_speed_in(const Background& bg, double sigma) {
  return sigma * sigma / (2.0 * bg.r_plus * (1.0 + sigma));
}
double max_char_speed(const Background& bg) { return 1.0 / (2.0 * bg.r_plus); }

void ModeOperator::check_finite() const {
  auto chk = [](const std::vector<double>& v, const char* name) {
    for (double x : v)
      if (!std::isfinite(x))
        throw std::runtime_error(std::string("mode operator: non-finite coefficient in ") + name);
    (void)name;
  };
  chk(a_tt, "a_tt"); chk(a_ts, "a_ts"); chk(a_ss, "a_ss");
  chk(a_t, "a_t"); chk(a_s, "a_s"); chk(a_0, "a_0"); chk(coupling, "coupling");
}

PhiFormCoefficients phi_form_coefficients(FieldKind kind, const Background& bg,
                                          int ell, double sigma) {
  if (!bg.schwarzschild())
    throw std::invalid_argument("operator assembly supports a = 0 only");
  const double rp = bg.r_plus, M = bg.mass;
  const double mu = 1.0 - sigma;
  PhiFormCoefficients c;
  // shared principal part of -r^2 Y V in (tau, sigma)
  c.a_ss = mu * sigma * sigma;
  c.a_ts = 2.0 * rp * (1.0 - 2.0 * sigma * sigma);
  c.a_tt = -4.0 * rp * rp * (1.0 + sigma);
  c.a_s = sigma * (2.0 - 3.0 * sigma);
  c.a_t = -4.0 * rp * sigma;
  const double lam = double(ell) * (ell + 1);
  switch (kind) {
    case FieldKind::Minus0:
    case FieldKind::Minus1:
      c.a_0 = -lam;
      break;
    case FieldKind::PlusType:
      // first-order outgoing term -2 (r-3M)/mu V and potential -12M/r
      c.a_s += sigma * (2.0 - 3.0 * sigma);
      c.a_t += -4.0 * M * sigma * (2.0 - 3.0 * sigma) / mu; // diverges at the horizon
      c.a_0 = -(lam - 2.0) - 6.0 * sigma;
      break;
  }
  return c;
}

double dn_coeff_v(FieldKind kind, const Background& bg, double r) {
  if (kind != FieldKind::PlusType) return 0.0;
  return -2.0 * (r - 3.0 * bg.mass) / (r * r);
}

double dn_coeff_0(FieldKind kind, const Background& bg, int ell, double r) {
  const double mu = mu_of(bg, r);
  const double lam = double(ell) * (ell + 1);
  if (kind == FieldKind::PlusType)
    return -(mu / (r * r)) * ((lam - 2.0) + 12.0 * bg.mass / r);
  return -(mu / (r * r)) * lam;
}

double dn_coeff_src(FieldKind kind, const Background& bg, double r) {
  if (kind != FieldKind::Minus0) return 0.0;
  return 2.0 * mu_of(bg, r) * (r - 3.0 * bg.mass) / (r * r * r * r);
}

WaveTemplate wave_template(FieldKind kind, const Background& bg, double r) {
  const double M = bg.mass;
  WaveTemplate t{0.0, 0.0, 0.0};
  if (kind == FieldKind::PlusType) {
    t.b_V = 2.0 * r * (r - 3.0 * M) / (r - 2.0 * M);
    t.b_0 = -2.0 + 10.0 * M / r;
  } else {
    t.b_0 = 2.0 * (1.0 - M / r);
  }
  return t;
}

namespace {

ModeOperator assemble_hyperboloidal(FieldKind kind, const Background& bg, int ell,
                                    std::shared_ptr<const RadialGrid> grid) {
  const double rp = bg.r_plus, M = bg.mass;
  const int n = grid->n;
  ModeOperator op;
  op.form = OperatorForm::Hyperboloidal;
  op.kind = kind;
  op.ell = ell;
  op.grid = grid;
  op.radiation_scaled = (kind == FieldKind::PlusType);
  op.a_tt.resize(n); op.a_ts.resize(n); op.a_ss.resize(n);
  op.a_t.resize(n); op.a_s.resize(n); op.a_0.resize(n); op.coupling.assign(n, 0.0);
  const double lam = double(ell) * (ell + 1);
  for (int i = 0; i < n; ++i) {
    const double s = grid->sigma[i];
    const double mu = 1.0 - s;
    op.a_ss[i] = mu * s * s;
    op.a_ts[i] = 2.0 * rp * (1.0 - 2.0 * s * s);
    op.a_tt[i] = -4.0 * rp * rp * (1.0 + s);
    switch (kind) {
      case FieldKind::Minus0:
        op.a_s[i] = s * (2.0 - 3.0 * s);
        op.a_t[i] = -4.0 * rp * s;
        op.a_0[i] = -lam;
        op.coupling[i] = s * (2.0 - 3.0 * s) / rp;
        break;
      case FieldKind::Minus1:
        op.a_s[i] = s * (2.0 - 3.0 * s);
        op.a_t[i] = -4.0 * rp * s;
        op.a_0[i] = -lam;
        break;
      case FieldKind::PlusType:
        // mu-conjugate of the raw operator; regular on the closed interval
        op.a_s[i] = 4.0 * s * mu;
        op.a_t[i] = 4.0 * M * (1.0 - 3.0 * s);
        op.a_0[i] = -(lam - 2.0) - 2.0 * s;
        break;
    }
  }
  op.q_dpi.resize(n); op.q_d2f.resize(n); op.q_df.resize(n);
  op.q_pi.resize(n); op.q_f.resize(n); op.q_src.resize(n);
  for (int i = 0; i < n; ++i) {
    const double dn = -op.a_tt[i]; // 4 rp^2 (1+sigma) > 0
    op.q_dpi[i] = op.a_ts[i] / dn;
    op.q_d2f[i] = op.a_ss[i] / dn;
    op.q_df[i] = op.a_s[i] / dn;
    op.q_pi[i] = op.a_t[i] / dn;
    op.q_f[i] = op.a_0[i] / dn;
    op.q_src[i] = op.coupling[i] / dn;
  }
  op.check_finite();
  return op;
}

ModeOperator assemble_double_null(FieldKind kind, const Background& bg, int ell) {
  ModeOperator op;
  op.form = OperatorForm::DoubleNull;
  op.kind = kind;
  op.ell = ell;
  op.radiation_scaled = false;
  return op;
}

void require_schwarzschild_mode(const Background& bg, int ell) {
  if (!bg.schwarzschild())
    throw std::invalid_argument("operator assembly supports a = 0 only");
  if (ell < 1) throw std::invalid_argument("operator assembly requires l >= 1");
}

} // namespace

ModeOperator assemble_plus(const Background& bg, int ell, const HeightGauge& gauge,
                           std::shared_ptr<const RadialGrid> grid, OperatorForm form) {
  require_schwarzschild_mode(bg, ell);
  (void)gauge; // the gauge enters through the closed-form sigma coefficients
  if (form == OperatorForm::DoubleNull) return assemble_double_null(FieldKind::PlusType, bg, ell);
  return assemble_hyperboloidal(FieldKind::PlusType, bg, ell, std::move(grid));
}

MinusSystem assemble_minus_system(const Background& bg, int ell,
                                  const HeightGauge& gauge,
                                  std::shared_ptr<const RadialGrid> grid,
                                  OperatorForm form) {
  require_schwarzschild_mode(bg, ell);
  (void)gauge;
  MinusSystem sys;
  if (form == OperatorForm::DoubleNull) {
    sys.op0 = assemble_double_null(FieldKind::Minus0, bg, ell);
    sys.op1 = assemble_double_null(FieldKind::Minus1, bg, ell);
    sys.op2 = assemble_double_null(FieldKind::PlusType, bg, ell);
    return sys;
  }
  sys.op0 = assemble_hyperboloidal(FieldKind::Minus0, bg, ell, grid);
  sys.op1 = assemble_hyperboloidal(FieldKind::Minus1, bg, ell, grid);
  sys.op2 = assemble_hyperboloidal(FieldKind::PlusType, bg, ell, std::move(grid));
  return sys;
}

CurlyVrResult apply_curlyVR(std::span<const double> f, std::span<const double> fdot,
                            const RadialGrid& grid) {
  const int n = grid.n;
  if (int(f.size()) != n || int(fdot.size()) != n)
    throw std::invalid_argument("apply_curlyVR: profile size mismatch");
  const double rp = grid.bg.r_plus;
  CurlyVrResult out;
  out.value.resize(n);
  for (int i = 0; i < n; ++i) {
    const double s = grid.sigma[i];
    const double mu = 1.0 - s;
    const double df = fd_d1_at(f, i, grid.dsigma);
    if (i == n - 1) {
      if (fdot[i] == 0.0) {
        out.value[i] = -rp * df;
      } else {
        // horizon node: the 2 rp^2/mu weight is singular; fill by quadratic
        // extrapolation from the last interior nodes and flag
        out.horizon_extrapolated = true;
        out.value[i] = 3.0 * out.value[i - 1] - 3.0 * out.value[i - 2] + out.value[i - 3];
      }
      continue;
    }
    out.value[i] = -rp * df + (2.0 * rp * rp / mu) * fdot[i];
  }
  return out;
}

double tsi_mode_coefficient(int ell) {
  const auto l0 = ladder_coefficients(0, ell);
  const auto l1 = ladder_coefficients(1, ell);
  return 2.0 * l0.alpha_lower * l1.alpha_lower;
}

std::vector<double> tsi_residual(std::span<const double> phi_plus,
                                 std::span<const double> phi_minus2, int ell) {
  if (phi_plus.size() != phi_minus2.size())
    throw std::invalid_argument("tsi_residual: fields must share one grid and slice");
  const double c = tsi_mode_coefficient(ell);
  std::vector<double> res(phi_plus.size());
  for (size_t i = 0; i < res.size(); ++i) res[i] = c * phi_plus[i] - phi_minus2[i];
  return res;
}

} // namespace tailsim
