#include "tailsim/spinweight.hpp"

#include <cmath>
#include <numbers>

namespace tailsim {

namespace test_hooks {
int ladder_sign = +1;
}

void validate_mode(const ModeIndex& mode) {
  if (std::abs(mode.s) > 2)
    throw std::domain_error("mode: |s| must be <= 2");
  if (mode.l < std::abs(mode.s))
    throw std::domain_error("mode: l must be >= |s|");
  if (std::abs(mode.m) > mode.l)
    throw std::domain_error("mode: |m| must be <= l");
}

int eigenvalue_lambda(int s, int l) {
  if (l < std::abs(s))
    throw std::domain_error("eigenvalue_lambda: l must be >= |s|");
  return (l + s) * (l - s + 1);
}

LadderCoefficients ladder_coefficients(int s, int l) {
  if (l < std::abs(s))
    throw std::domain_error("ladder_coefficients: l must be >= |s|");
  LadderCoefficients lc;
  lc.lambda = eigenvalue_lambda(s, l);
  // the hook perturbs one table entry (spin 0) so the downstream identity
  // checks demonstrably catch a sign defect
  const int hook = (s == 0) ? test_hooks::ladder_sign : 1;
  lc.alpha_lower = -hook * std::sqrt(0.5 * (l + s) * (l - s + 1.0));
  lc.beta_raise = std::sqrt(0.5 * (l - s) * (l + s + 1.0));
  return lc;
}

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

} // namespace

double wigner_d(int l, int mp, int m, double beta) {
  const double ch = std::cos(0.5 * beta);
  const double sh = std::sin(0.5 * beta);
  const int kmin = std::max(0, m - mp);
  const int kmax = std::min(l + m, l - mp);
  const double lognorm = 0.5 * (log_factorial(l + mp) + log_factorial(l - mp) +
                                log_factorial(l + m) + log_factorial(l - m));
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const int pc = 2 * l + m - mp - 2 * k; // power of cos(beta/2)
    const int ps = mp - m + 2 * k;         // power of sin(beta/2)
    if (pc < 0 || ps < 0) continue;
    const double logterm = lognorm - log_factorial(l + m - k) - log_factorial(k) -
                           log_factorial(mp - m + k) - log_factorial(l - mp - k);
    double term = std::exp(logterm) * std::pow(ch, pc) * std::pow(sh, ps);
    if ((mp - m + k) % 2 != 0) term = -term;
    sum += term;
  }
  return sum;
}

std::complex<double> evaluate_swsh(const ModeIndex& mode, double theta, double phi) {
  validate_mode(mode);
  const int l = mode.l, m = mode.m, s = mode.s;
  double val = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi)) *
               wigner_d(l, -m, s, theta);
  if (m % 2 != 0) val = -val;
  if (s % 2 != 0) val = -val; // phase making edth' carry a negative coefficient
  return val * std::exp(std::complex<double>(0.0, m * phi));
}

std::complex<double> edth_fd(const std::function<std::complex<double>(double)>& g,
                             int s, int m, double theta, double h) {
  // edth = (d_theta + i csc(theta) d_phi - s cot(theta)) / sqrt(2), d_phi -> i m
  const std::complex<double> dg =
      (g(theta - 2 * h) - 8.0 * g(theta - h) + 8.0 * g(theta + h) - g(theta + 2 * h)) /
      (12.0 * h);
  const std::complex<double> val = g(theta);
  return (dg - m / std::sin(theta) * val - double(s) / std::tan(theta) * val) /
         std::sqrt(2.0);
}

std::complex<double> edthp_fd(const std::function<std::complex<double>(double)>& g,
                              int s, int m, double theta, double h) {
  const std::complex<double> dg =
      (g(theta - 2 * h) - 8.0 * g(theta - h) + 8.0 * g(theta + h) - g(theta + 2 * h)) /
      (12.0 * h);
  const std::complex<double> val = g(theta);
  return (dg + m / std::sin(theta) * val + double(s) / std::tan(theta) * val) /
         std::sqrt(2.0);
}

Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.x[i] = x;
    q.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return q;
}

SphereGrid make_sphere_grid(int lmax) {
  SphereGrid g;
  g.lmax = lmax;
  const int ntheta = 2 * lmax + 4;
  const int nphi = 2 * (2 * lmax + 4);
  Quadrature q = gauss_legendre(ntheta);
  g.theta.resize(ntheta);
  g.wtheta.resize(ntheta);
  for (int i = 0; i < ntheta; ++i) {
    g.theta[i] = std::acos(q.x[i]);
    g.wtheta[i] = q.w[i];
  }
  g.phi.resize(nphi);
  for (int j = 0; j < nphi; ++j) g.phi[j] = 2.0 * std::numbers::pi * j / nphi;
  g.wphi = 2.0 * std::numbers::pi / nphi;
  return g;
}

std::complex<double> project_mode(
    const std::function<std::complex<double>(double, double)>& f,
    const ModeIndex& mode, const SphereGrid& grid) {
  validate_mode(mode);
  if (grid.lmax < mode.l)
    throw std::invalid_argument("project_mode: grid under-resolved for requested degree");
  std::complex<double> acc = 0.0;
  for (size_t i = 0; i < grid.theta.size(); ++i) {
    std::complex<double> ring = 0.0;
    for (size_t j = 0; j < grid.phi.size(); ++j) {
      const std::complex<double> y = evaluate_swsh(mode, grid.theta[i], grid.phi[j]);
      ring += f(grid.theta[i], grid.phi[j]) * std::conj(y);
    }
    acc += grid.wtheta[i] * grid.wphi * ring;
  }
  return acc;
}

} // namespace tailsim
