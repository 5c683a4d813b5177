#include "tailsim/teukolsky.hpp"

#include "tailsim/operators.hpp"

#include <cmath>

namespace tailsim {

namespace {

using cvec = std::vector<std::complex<double>>;
using cplx = std::complex<double>;

struct Slab {
  int nr, nt;
  double dr, dth;
  std::vector<double> r, th;
  cplx at(const cvec& a, int i, int j) const { return a[size_t(i) * nt + j]; }
};

// 4th-order derivatives along r (rows) and theta (columns)
cvec d_r(const Slab& s, const cvec& a) {
  cvec out(a.size());
  std::vector<double> colr(s.nr), colw(s.nr);
  for (int j = 0; j < s.nt; ++j) {
    for (int part = 0; part < 2; ++part) {
      for (int i = 0; i < s.nr; ++i)
        colr[i] = part == 0 ? a[size_t(i) * s.nt + j].real() : a[size_t(i) * s.nt + j].imag();
      for (int i = 0; i < s.nr; ++i) {
        const double v = fd_d1_at(colr, i, s.dr);
        auto& o = out[size_t(i) * s.nt + j];
        o = part == 0 ? cplx(v, o.imag()) : cplx(o.real(), v);
      }
    }
  }
  (void)colw;
  return out;
}

cvec d_theta(const Slab& s, const cvec& a, int order) {
  cvec out(a.size());
  std::vector<double> row(s.nt);
  for (int i = 0; i < s.nr; ++i) {
    for (int part = 0; part < 2; ++part) {
      for (int j = 0; j < s.nt; ++j)
        row[j] = part == 0 ? a[size_t(i) * s.nt + j].real() : a[size_t(i) * s.nt + j].imag();
      for (int j = 0; j < s.nt; ++j) {
        const double v = order == 1 ? fd_d1_at(row, j, s.dth) : fd_d2_at(row, j, s.dth);
        auto& o = out[size_t(i) * s.nt + j];
        o = part == 0 ? cplx(v, o.imag()) : cplx(o.real(), v);
      }
    }
  }
  return out;
}

// 2 edth edth' with d_phi -> i m, applied with finite differences in theta
cvec angular_op(const Slab& s, const cvec& a, int spin, int m) {
  const cvec ath = d_theta(s, a, 1);
  const cvec athth = d_theta(s, a, 2);
  cvec out(a.size());
  for (int i = 0; i < s.nr; ++i)
    for (int j = 0; j < s.nt; ++j) {
      const double th = s.th[j];
      const double st = std::sin(th), ct = std::cos(th);
      const size_t k = size_t(i) * s.nt + j;
      out[k] = athth[k] + ct / st * ath[k] - double(m) * m / (st * st) * a[k] -
               2.0 * spin * m * ct / (st * st) * a[k] -
               (double(spin) * spin * ct * ct / (st * st) + spin) * a[k];
    }
  return out;
}

} // namespace

TeukolskyCheck apply_teukolsky_operator(int s, const Background& bg,
                                        const ManufacturedField& field,
                                        const TeukGrid& grid) {
  if (std::abs(s) > 2) throw std::invalid_argument("teukolsky: |s| <= 2");
  if (grid.nr < 8 || grid.ntheta < 8)
    throw std::invalid_argument("teukolsky: grid too coarse for 4th-order stencils");
  if (grid.r_lo <= bg.r_plus)
    throw std::invalid_argument("teukolsky: radial window must stay outside the horizon");

  Slab sl;
  sl.nr = grid.nr;
  sl.nt = grid.ntheta;
  sl.dr = (grid.r_hi - grid.r_lo) / (grid.nr - 1);
  sl.dth = (grid.theta_hi - grid.theta_lo) / (grid.ntheta - 1);
  sl.r.resize(sl.nr);
  sl.th.resize(sl.nt);
  for (int i = 0; i < sl.nr; ++i) sl.r[i] = grid.r_lo + i * sl.dr;
  for (int j = 0; j < sl.nt; ++j) sl.th[j] = grid.theta_lo + j * sl.dth;

  // time factors at t0
  cplx T0, T1, T2;
  if (field.harmonic) {
    const cplx iw(0.0, -field.omega);
    T0 = std::exp(iw * field.t0);
    T1 = iw * T0;
    T2 = iw * iw * T0;
  } else {
    T0 = T1 = T2 = 0.0;
    double tp = 1.0;
    for (size_t k = 0; k < field.poly.size(); ++k) {
      T0 += field.poly[k] * tp;
      if (k >= 1) T1 += field.poly[k] * double(k) * (k >= 1 ? std::pow(field.t0, k - 1) : 0.0);
      if (k >= 2) T2 += field.poly[k] * double(k) * (k - 1.0) * std::pow(field.t0, k - 2);
      tp *= field.t0;
    }
  }

  const size_t nn = size_t(sl.nr) * sl.nt;
  cvec psi(nn), psit(nn), psitt(nn);
  for (int i = 0; i < sl.nr; ++i)
    for (int j = 0; j < sl.nt; ++j) {
      const cplx f = field.profile(sl.r[i], sl.th[j]);
      psi[size_t(i) * sl.nt + j] = f * T0;
      psit[size_t(i) * sl.nt + j] = f * T1;
      psitt[size_t(i) * sl.nt + j] = f * T2;
    }

  const double M = bg.mass, a = bg.spin;
  const cplx im(0.0, field.m);

  // route A: the separable Boyer-Lindquist form
  const cvec psir = d_r(sl, psi);
  const cvec psirr = d_r(sl, psir);
  const cvec psith = d_theta(sl, psi, 1);
  const cvec psithth = d_theta(sl, psi, 2);
  TeukolskyCheck out;
  out.residual_tme.resize(nn);
  out.residual_boxhat.resize(nn);
  for (int i = 0; i < sl.nr; ++i)
    for (int j = 0; j < sl.nt; ++j) {
      const size_t k = size_t(i) * sl.nt + j;
      const double r = sl.r[i], th = sl.th[j];
      const double st = std::sin(th), ct = std::cos(th);
      const double dl = delta_of(bg, r);
      const double R = r * r + a * a;
      cplx v = -(R * R / dl - a * a * st * st) * psitt[k];
      v -= 4.0 * M * a * r / dl * im * psit[k];
      v -= (a * a / dl - 1.0 / (st * st)) * im * im * psi[k];
      v += dl * psirr[k] + (1.0 - s) * (2.0 * r - 2.0 * M) * psir[k];
      v += psithth[k] + ct / st * psith[k];
      v += 2.0 * s * (a * (r - M) / dl * im + cplx(0.0, 1.0) * ct / (st * st) * im) * psi[k];
      v += 2.0 * s * (M * (r * r - a * a) / dl - r - cplx(0.0, a * ct)) * psit[k];
      v -= (double(s) * s * ct * ct / (st * st) + s) * psi[k];
      out.residual_tme[k] = v;
    }

  // route B: nested null-pair product plus angular and lower-order terms
  cvec w(nn), wt(nn);
  const cvec psitr = d_r(sl, psit);
  for (int i = 0; i < sl.nr; ++i)
    for (int j = 0; j < sl.nt; ++j) {
      const size_t k = size_t(i) * sl.nt + j;
      const double r = sl.r[i];
      const double dl = delta_of(bg, r);
      const double R = r * r + a * a;
      w[k] = psit[k] + a * im / R * psi[k] + dl / R * psir[k];
      wt[k] = psitt[k] + a * im / R * psit[k] + dl / R * psitr[k];
    }
  const cvec wr = d_r(sl, w);
  const cvec ang = angular_op(sl, psi, s, field.m);
  for (int i = 0; i < sl.nr; ++i)
    for (int j = 0; j < sl.nt; ++j) {
      const size_t k = size_t(i) * sl.nt + j;
      const double r = sl.r[i], th = sl.th[j];
      const double st = std::sin(th), ct = std::cos(th);
      const double dl = delta_of(bg, r);
      const double R = r * r + a * a;
      const cplx Yw = (R * wt[k] + a * im * w[k]) / dl - wr[k];
      const double q = double(s) * s *
                       (2.0 * M * r * r * r + a * a * r * r - 4.0 * a * a * M * r +
                        a * a * a * a) / (R * R);
      cplx box = -R * Yw + ang[k] + 2.0 * a * im * psit[k] +
                 a * a * st * st * psitt[k] -
                 cplx(0.0, 2.0 * a * s * ct) * psit[k] + 2.0 * a * r / R * im * psi[k] -
                 q * psi[k];
      // identity: the separable form equals the compact form plus these terms
      cplx v = box + (2.0 * r * dl / R - s * (2.0 * r - 2.0 * M)) * psir[k] +
               2.0 * s * (M * (r * r - a * a) / dl - r) * psit[k] +
               2.0 * s * a * (r - M) / dl * im * psi[k] + q * psi[k];
      out.residual_boxhat[k] = v;
    }

  for (size_t k = 0; k < nn; ++k) {
    out.max_difference =
        std::max(out.max_difference, std::abs(out.residual_tme[k] - out.residual_boxhat[k]));
    out.max_tme = std::max(out.max_tme, std::abs(out.residual_tme[k]));
    out.max_boxhat = std::max(out.max_boxhat, std::abs(out.residual_boxhat[k]));
  }
  return out;
}

} // namespace tailsim
