#include "tailsim/background.hpp"

#include <cmath>
#include <limits>

namespace tailsim {

std::pair<double, double> horizon_radii(double mass, double spin) {
  if (!(mass > 0.0)) throw std::domain_error("background: mass must be positive");
  if (!(std::abs(spin) < mass))
    throw std::domain_error("background: extremal or super-extremal spin (|a| >= M)");
  const double root = std::sqrt(mass * mass - spin * spin);
  return {mass + root, mass - root};
}

Background make_background(double mass, double spin) {
  auto [rp, rm] = horizon_radii(mass, spin);
  Background bg;
  bg.mass = mass;
  bg.spin = spin;
  bg.r_plus = rp;
  bg.r_minus = rm;
  return bg;
}

double delta_of(const Background& bg, double r) {
  return r * r - 2.0 * bg.mass * r + bg.spin * bg.spin;
}

double mu_of(const Background& bg, double r) {
  return delta_of(bg, r) / (r * r + bg.spin * bg.spin);
}

MetricScalars metric_scalars(const Background& bg, double r, double theta) {
  if (r < bg.r_plus)
    throw std::domain_error("metric_scalars: r below the outer horizon");
  MetricScalars m;
  const double c = std::cos(theta);
  m.delta = delta_of(bg, r);
  m.sigma = r * r + bg.spin * bg.spin * c * c;
  m.mu = m.delta / (r * r + bg.spin * bg.spin);
  m.kappa = std::complex<double>(r, -bg.spin * c);
  return m;
}

double tortoise(const Background& bg, double r) {
  if (r <= bg.r_plus)
    throw std::domain_error("tortoise: r must lie strictly outside the horizon");
  const double M = bg.mass;
  if (bg.schwarzschild()) {
    // r - 3M + 2M ln((r-2M)/M)
    return r - 3.0 * M + 2.0 * M * std::log((r - 2.0 * M) / M);
  }
  const double rp = bg.r_plus, rm = bg.r_minus;
  const double ap = 2.0 * M * rp / (rp - rm);
  const double am = -2.0 * M * rm / (rp - rm);
  auto f = [&](double x) {
    return x + ap * std::log(x - rp) + am * std::log(x - rm);
  };
  return f(r) - f(3.0 * M); // r*(3M) = 0 imposed numerically
}

double tortoise_inverse(const Background& bg, double rstar) {
  const double rp = bg.r_plus;
  // Newton in x = log(r - r_plus); well conditioned on both sides because
  // r* ~ const * log(r - r_plus) near the horizon and r* ~ r far out.
  double x = (rstar > 4.0 * bg.mass) ? std::log(rstar) : std::log(rp) + (rstar - rp) / (2.0 * bg.mass);
  // r - r_plus below about r_plus * eps is not representable in r itself, so
  // the inverse saturates there (callers clip the tortoise range first)
  const double xmin = std::log(rp) - 34.0;
  x = std::max(x, xmin);
  // bracket the root
  double xlo = x, xhi = x;
  auto fval = [&](double xx) { return tortoise(bg, rp + std::exp(xx)) - rstar; };
  while (fval(xlo) > 0.0 && xlo > xmin) xlo = std::max(xmin, xlo - 10.0);
  while (fval(xhi) < 0.0) xhi += 10.0;
  if (fval(xlo) > 0.0) return rp + std::exp(xlo); // saturated at the representable edge
  x = 0.5 * (xlo + xhi);
  for (int it = 0; it < 200; ++it) {
    const double r = rp + std::exp(x);
    const double f = tortoise(bg, r) - rstar;
    if (f > 0.0) xhi = x; else xlo = x;
    const double df = std::exp(x) / mu_of(bg, r);
    double xn = x - f / df;
    if (!(xn > xlo && xn < xhi)) xn = 0.5 * (xlo + xhi); // bisection fallback
    if (std::abs(f) < 1e-13 * (1.0 + std::abs(rstar)) && it > 2) break;
    x = xn;
  }
  return rp + std::exp(x);
}

double ef_phase_twist(const Background& bg, double r) {
  if (bg.schwarzschild()) return 0.0;
  const double rp = bg.r_plus, rm = bg.r_minus, a = bg.spin;
  auto f = [&](double x) { return a / (rp - rm) * std::log((x - rp) / (x - rm)); };
  return f(r) - f(3.0 * bg.mass);
}

double HeightGauge::H(double r) const {
  const double s = bg.r_plus / r;
  return 2.0 / mu_of(bg, r) * s * s;
}

double HeightGauge::muH(double r) const {
  const double s = bg.r_plus / r;
  return 2.0 * s * s;
}

double HeightGauge::hprime(double r) const {
  // 2/mu (1 - (r_plus/r)^2), regular at the horizon
  const double s = bg.r_plus / r;
  return 2.0 / mu_of(bg, r) * (1.0 - s * s);
}

double HeightGauge::h(double r) const {
  const double M = bg.mass;
  if (bg.schwarzschild()) {
    // integral of 2 + 4M/r
    return 2.0 * (r - 3.0 * M) + 4.0 * M * std::log(r / (3.0 * M));
  }
  // h' = 2 (r^2+a^2)(r^2-rp^2) / (Delta r^2)
  //    = 2 [ 1 - rp^2/r^2 + 2Mr/Delta - 2M rp^2 / (r Delta) ]
  const double rp = bg.r_plus, rm = bg.r_minus, a = bg.spin;
  const double ap = 2.0 * M * rp / (rp - rm);
  const double am = -2.0 * M * rm / (rp - rm);
  // 1/(r Delta) = 1/(a^2 r) + d/(r-rp) + e/(r-rm), with rp*rm = a^2
  const double d = 1.0 / (rp * (rp - rm));
  const double e = -1.0 / (rm * (rp - rm));
  auto f = [&](double x) {
    double val = x + rp * rp / x;
    val += ap * std::log(x - rp) + am * std::log(x - rm);
    val -= 2.0 * M * rp * rp *
           (std::log(x) / (a * a) + d * std::log(x - rp) + e * std::log(x - rm));
    return 2.0 * val;
  };
  return f(r) - f(3.0 * M);
}

HeightGauge height_gauge(const Background& bg) {
  HeightGauge g;
  g.bg = bg;
  g.c0 = 2.0 * bg.r_plus * bg.r_plus;
  // c1 = lim_{r->rp} (H - 2/mu) = -4 rp (rp^2 + a^2) / (rp^2 (rp - rm))
  g.c1 = -4.0 * bg.r_plus * (bg.r_plus * bg.r_plus + bg.spin * bg.spin) /
         (bg.r_plus * bg.r_plus * (bg.r_plus - bg.r_minus));
  return g;
}

Point4 chart_convert(const Background& bg, const Point4& p, Chart from, Chart to) {
  if (from == to) return p;
  const bool bl_involved = (from == Chart::BoyerLindquist || to == Chart::BoyerLindquist);
  if (bl_involved && p.r <= bg.r_plus)
    throw std::domain_error("chart_convert: Boyer-Lindquist chart is singular at the horizon");
  if (p.r < bg.r_plus)
    throw std::domain_error("chart_convert: point not in the exterior region");

  const HeightGauge gauge = height_gauge(bg);
  // Route through the ingoing chart (v, r, theta, phit).
  Point4 ef = p;
  switch (from) {
    case Chart::BoyerLindquist:
      ef.x0 = p.x0 + tortoise(bg, p.r);
      ef.phi = p.phi + ef_phase_twist(bg, p.r);
      break;
    case Chart::EddingtonFinkelstein:
      break;
    case Chart::Hyperboloidal:
      ef.x0 = p.x0 + gauge.h(p.r);
      break;
  }
  Point4 out = ef;
  switch (to) {
    case Chart::BoyerLindquist:
      out.x0 = ef.x0 - tortoise(bg, ef.r);
      out.phi = ef.phi - ef_phase_twist(bg, ef.r);
      break;
    case Chart::EddingtonFinkelstein:
      break;
    case Chart::Hyperboloidal:
      out.x0 = ef.x0 - gauge.h(ef.r);
      break;
  }
  return out;
}

} // namespace tailsim
