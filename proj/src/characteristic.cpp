#include "tailsim/characteristic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace tailsim {

double mode_lambda_root(int ell) {
  return std::sqrt(2.0) * ladder_coefficients(0, ell).beta_raise;
}

namespace {

// 4th-order first derivative of a complex sample vector (uniform spacing)
cplx d1_cplx(const std::vector<cplx>& f, int i, double h) {
  const int n = int(f.size());
  const double inv = 1.0 / (12.0 * h);
  if (i >= 2 && i <= n - 3)
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
  if (i == 0)
    return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
  if (i == 1)
    return (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
  if (i == n - 1)
    return -(-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] -
             3.0 * f[n - 5]) * inv;
  return -(-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] +
           f[n - 5]) * inv;
}

std::vector<double> cone_radii(const Background& bg, double rstar0, int n, double h,
                               double cutoff, bool* clipped) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    double rs = rstar0 + i * h;
    if (rs < cutoff) {
      if (clipped && !*clipped) {
        std::fprintf(stderr,
                     "characteristic: lattice reaches r* = %.1f; clipped at the "
                     "tortoise cutoff %.1f\n", rs, cutoff);
        *clipped = true;
      }
      rs = cutoff;
    }
    r[i] = tortoise_inverse(bg, rs);
  }
  return r;
}

} // namespace

std::vector<double> ucone_radii(const DiamondSpec& spec, const Background& bg) {
  bool clipped = false;
  return cone_radii(bg, spec.v0 - spec.u0, spec.nv, spec.h, spec.rstar_cutoff, &clipped);
}

std::vector<double> vcone_radii(const DiamondSpec& spec, const Background& bg) {
  bool clipped = false;
  std::vector<double> r(spec.nu);
  for (int i = 0; i < spec.nu; ++i) {
    double rs = (spec.v0 - spec.u0) - i * spec.h;
    if (rs < spec.rstar_cutoff) rs = spec.rstar_cutoff;
    r[i] = tortoise_inverse(bg, rs);
  }
  (void)clipped;
  return r;
}

ReconstructedCone reconstruct_middle_on_cone(const std::vector<cplx>& psim,
                                             const std::vector<double>& r_of,
                                             double h, const Background& bg, int ell) {
  if (ell < 1)
    throw std::invalid_argument("reconstruct_middle_on_cone: needs l >= 1");
  if (psim.size() != r_of.size() || psim.size() < 6)
    throw std::invalid_argument("reconstruct_middle_on_cone: bad cone sample");
  const int n = int(psim.size());
  const double lam = mode_lambda_root(ell);
  ReconstructedCone out;
  out.evolved.phi0.resize(n);
  out.evolved.phi1.resize(n);
  out.evolved.chi.resize(n);
  out.psi0.resize(n);
  out.psip.resize(n);
  for (int j = 0; j < n; ++j)
    out.evolved.phi0[j] = delta_of(bg, r_of[j]) * psim[j] / r_of[j];
  for (int j = 0; j < n; ++j) {
    const double r = r_of[j];
    const double fac = r * r * r * r / delta_of(bg, r);
    out.evolved.phi1[j] = fac * d1_cplx(out.evolved.phi0, j, h);
    out.psi0[j] = -2.0 / lam * out.evolved.phi1[j];
  }
  for (int j = 0; j < n; ++j) {
    out.psip[j] = -r_of[j] / (2.0 * lam) * d1_cplx(out.psi0, j, h);
    out.evolved.chi[j] = out.psip[j] / r_of[j];
  }
  return out;
}

ConeFunction cone_from_family(const DataFamily& family, const DiamondSpec& spec,
                              const Background& bg) {
  if (family.kind != DataFamily::Kind::CompactBump &&
      family.kind != DataFamily::Kind::MonopoleCharge)
    throw std::invalid_argument("cone data: characteristic runs take the bump or "
                                "monopole families");
  const std::vector<double> r = ucone_radii(spec, bg);
  std::vector<cplx> psim(spec.nv, cplx(0.0));
  if (family.kind == DataFamily::Kind::CompactBump && family.amplitude != 0.0) {
    for (int j = 0; j < spec.nv; ++j)
      psim[j] = family.amplitude *
                bump_c_inf((r[j] - family.center) / (4.0 * family.width));
  }
  return reconstruct_middle_on_cone(psim, r, spec.h, bg, spec.ell).evolved;
}

DiamondSolution evolve_characteristic(const ConeFunction& ucone,
                                      const ConeFunction& vcone,
                                      const DiamondSpec& spec, const Background& bg) {
  const int nu = spec.nu, nv = spec.nv;
  if (nu < 4 || nv < 4) throw std::invalid_argument("characteristic: domain too small");
  if (int(ucone.phi0.size()) != nv || int(vcone.phi0.size()) != nu)
    throw std::invalid_argument("characteristic: cone data sized to the lattice");

  DiamondSolution sol;
  sol.spec = spec;
  sol.bg = bg;
  // radii per diagonal d = j - i
  sol.r_diag.resize(nu + nv - 1);
  {
    bool clipped = false;
    const auto r =
        cone_radii(bg, (spec.v0 - spec.u0) - (nu - 1) * spec.h, nu + nv - 1, spec.h,
                   spec.rstar_cutoff, &clipped);
    sol.r_diag = r;
    sol.clipped = clipped;
  }
  const HeightGauge gauge = height_gauge(bg);
  const double lam = mode_lambda_root(spec.ell);
  const cplx q00 = std::sqrt(4.0 * std::numbers::pi) * spec.charge;

  if (spec.store_full) {
    sol.full_phi0.assign(size_t(nu) * nv, cplx(0.0));
    sol.full_phi1.assign(size_t(nu) * nv, cplx(0.0));
    sol.full_chi.assign(size_t(nu) * nv, cplx(0.0));
  }

  // observers: fixed r means fixed diagonal v - u = r*(r)
  struct ObserverCtx {
    double rstar, r, h_of_r;
  };
  std::vector<ObserverCtx> octx;
  for (double robs : spec.observer_radii) {
    octx.push_back({tortoise(bg, robs), robs, gauge.h(robs)});
    sol.observers.push_back({});
    sol.observers.back().r = robs;
  }

  std::vector<cplx> p0_prev = ucone.phi0, p1_prev = ucone.phi1, ch_prev = ucone.chi;
  std::vector<cplx> p0_cur(nv), p1_cur(nv), ch_cur(nv);
  if (spec.store_full) {
    std::copy(p0_prev.begin(), p0_prev.end(), sol.full_phi0.begin());
    std::copy(p1_prev.begin(), p1_prev.end(), sol.full_phi1.begin());
    std::copy(ch_prev.begin(), ch_prev.end(), sol.full_chi.begin());
  }

  auto record_row = [&](int i, const std::vector<cplx>& p0, const std::vector<cplx>& p1,
                        const std::vector<cplx>& ch) {
    for (size_t k = 0; k < octx.size(); ++k) {
      const double vstar = (spec.u0 + i * spec.h) + octx[k].rstar;
      const double x = (vstar - spec.v0) / spec.h;
      const int j0 = int(std::floor(x)) - 1;
      if (j0 < 0 || j0 + 3 >= nv) continue;
      // 4-point Lagrange interpolation in v along the row
      const double t = x - (j0 + 1);
      const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
      const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
      const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
      const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
      auto interp = [&](const std::vector<cplx>& a) {
        return w0 * a[j0] + w1 * a[j0 + 1] + w2 * a[j0 + 2] + w3 * a[j0 + 3];
      };
      const double r = octx[k].r;
      const cplx phi0 = interp(p0), phi1 = interp(p1), chi = interp(ch);
      auto& s = sol.observers[k];
      s.tau.push_back(2.0 * vstar - octx[k].h_of_r);
      s.psim.push_back(r * phi0 / delta_of(bg, r));
      s.psi0.push_back(-2.0 / lam * phi1);
      s.psip.push_back(r * chi);
      s.psi00.push_back(q00);
    }
  };
  record_row(0, p0_prev, p1_prev, ch_prev);

  for (int i = 1; i < nu; ++i) {
    // v-cone values seed the j = 0 node of every row
    p0_cur[0] = vcone.phi0[i];
    p1_cur[0] = vcone.phi1[i];
    for (int j = 1; j < nv; ++j) {
      const double rc = sol.r_diag[(j - 1) - (i - 1) + nu - 1]; // cell-center radius
      const cplx e0 = p0_prev[j], w0 = p0_cur[j - 1], s0 = p0_prev[j - 1];
      const cplx e1 = p1_prev[j], w1 = p1_cur[j - 1], s1 = p1_prev[j - 1];
      const double h2 = spec.h * spec.h;
      const double c1 = dn_coeff_0(FieldKind::Minus1, bg, spec.ell, rc);
      p1_cur[j] = e1 + w1 - s1 + h2 * c1 * 0.5 * (e1 + w1);
      const double c0 = dn_coeff_0(FieldKind::Minus0, bg, spec.ell, rc);
      const double cs = dn_coeff_src(FieldKind::Minus0, bg, rc);
      p0_cur[j] = e0 + w0 - s0 + h2 * (c0 * 0.5 * (e0 + w0) + cs * 0.5 * (e1 + w1));
    }
    if (spec.evolve_chi) {
      // transport d_u chi = -(mu/r^2) phi1 along u at fixed v (trapezoid)
      ch_cur[0] = vcone.chi[i];
      for (int j = 1; j < nv; ++j) {
        const double ra = sol.r_diag[j - (i - 1) + nu - 1];
        const double rb = sol.r_diag[j - i + nu - 1];
        const cplx ga = -(mu_of(bg, ra) / (ra * ra)) * p1_prev[j];
        const cplx gb = -(mu_of(bg, rb) / (rb * rb)) * p1_cur[j];
        ch_cur[j] = ch_prev[j] + 0.5 * spec.h * (ga + gb);
      }
    }
    if (spec.store_full) {
      std::copy(p0_cur.begin(), p0_cur.end(), sol.full_phi0.begin() + size_t(i) * nv);
      std::copy(p1_cur.begin(), p1_cur.end(), sol.full_phi1.begin() + size_t(i) * nv);
      std::copy(ch_cur.begin(), ch_cur.end(), sol.full_chi.begin() + size_t(i) * nv);
    }
    record_row(i, p0_cur, p1_cur, ch_cur);
    p0_prev.swap(p0_cur);
    p1_prev.swap(p1_cur);
    ch_prev.swap(ch_cur);
  }
  return sol;
}

double FirstOrderResiduals::max() const {
  return std::max(std::max(angular_plus, angular_minus),
                  std::max(radial_plus, radial_minus));
}

FirstOrderResiduals first_order_residuals(const DiamondSolution& sol, double r_min) {
  if (!sol.spec.store_full)
    throw std::invalid_argument("first_order_residuals: needs a stored lattice");
  const int nu = sol.spec.nu, nv = sol.spec.nv;
  const double h = sol.spec.h;
  const double lam = mode_lambda_root(sol.spec.ell);
  const Background& bg = sol.bg;
  FirstOrderResiduals res;
  for (int i = 2; i < nu - 2; ++i)
    for (int j = 2; j < nv - 2; ++j) {
      const double r = sol.r_at(i, j);
      if (r < r_min) continue;
      const double mu = mu_of(bg, r);
      const double dl = delta_of(bg, r);
      auto f = [&](const std::vector<cplx>& a, int ii, int jj) { return sol.at(a, ii, jj); };
      // centered lattice derivatives
      const cplx du_phi0 = (f(sol.full_phi0, i + 1, j) - f(sol.full_phi0, i - 1, j)) / (2.0 * h);
      const cplx dv_phi0 = (f(sol.full_phi0, i, j + 1) - f(sol.full_phi0, i, j - 1)) / (2.0 * h);
      const cplx du_phi1 = (f(sol.full_phi1, i + 1, j) - f(sol.full_phi1, i - 1, j)) / (2.0 * h);
      const cplx dv_phi1 = (f(sol.full_phi1, i, j + 1) - f(sol.full_phi1, i, j - 1)) / (2.0 * h);
      const cplx du_chi = (f(sol.full_chi, i + 1, j) - f(sol.full_chi, i - 1, j)) / (2.0 * h);
      const cplx phi0 = f(sol.full_phi0, i, j);
      const cplx phi1 = f(sol.full_phi1, i, j);
      const cplx chi = f(sol.full_chi, i, j);
      const cplx psi0 = -2.0 / lam * phi1;
      const cplx dv_psi0 = -2.0 / lam * dv_phi1;
      const cplx du_psi0 = -2.0 / lam * du_phi1;
      const cplx psim = r * phi0 / dl;
      const cplx psip = r * chi;
      // middle from the ingoing derivative of the spin +1 scalar
      res.angular_plus = std::max(res.angular_plus,
          std::abs(lam * psi0 - 2.0 * r * r / mu * du_chi));
      // middle from the outgoing derivative of the spin -1 scalar
      res.angular_minus = std::max(res.angular_minus,
          std::abs(-lam * psi0 - 2.0 * (r * r * r * r / dl) * dv_phi0));
      // outgoing derivative of the middle against the spin +1 scalar
      res.radial_plus = std::max(res.radial_plus,
          std::abs(dv_psi0 + 2.0 * lam / r * psip));
      // ingoing derivative of the middle against the spin -1 scalar
      res.radial_minus = std::max(res.radial_minus,
          std::abs(du_psi0 / mu - 2.0 * lam * r * psim));
      (void)du_phi0;
    }
  return res;
}

double tsi_residual_diamond(const DiamondSolution& sol, double r_min) {
  if (!sol.spec.store_full)
    throw std::invalid_argument("tsi_residual_diamond: needs a stored lattice");
  const int nu = sol.spec.nu, nv = sol.spec.nv;
  const double h = sol.spec.h;
  const double coef = tsi_mode_coefficient(sol.spec.ell);
  double sup = 0.0;
  for (int i = 0; i < nu; ++i) {
    for (int j = 2; j < nv - 2; ++j) {
      const double r = sol.r_at(i, j);
      if (r < r_min) continue;
      // Phi^(2) by two centered outgoing derivatives of the base scalar
      auto vr = [&](int jj) {
        const double rr = sol.r_at(i, jj);
        const double fac = rr * rr * rr * rr / delta_of(sol.bg, rr);
        return fac * (sol.at(sol.full_phi0, i, jj + 1) - sol.at(sol.full_phi0, i, jj - 1)) /
               (2.0 * h);
      };
      const double fac = r * r * r * r / delta_of(sol.bg, r);
      const cplx phi2 = fac * (vr(j + 1) - vr(j - 1)) / (2.0 * h);
      const cplx phi_plus = fac * sol.at(sol.full_chi, i, j); // r^3 psi_plus / Delta
      sup = std::max(sup, std::abs(coef * phi_plus - phi2));
    }
  }
  return sup;
}

} // namespace tailsim
