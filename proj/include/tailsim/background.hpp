// background.hpp -- Kerr/Schwarzschild exterior geometry: metric scalars,
// tortoise coordinate, coordinate charts, and the hyperboloidal height gauge.
#pragma once

#include <complex>
#include <stdexcept>

namespace tailsim {

struct Background {
  double mass = 1.0;    // M
  double spin = 0.0;    // a, |a| < M
  double r_plus = 2.0;  // outer horizon M + sqrt(M^2 - a^2)
  double r_minus = 0.0; // inner horizon M - sqrt(M^2 - a^2)

  bool schwarzschild() const { return spin == 0.0; }
};

// Throws std::domain_error for M <= 0 or |a| >= M (extremal and beyond).
Background make_background(double mass, double spin);

// Roots of Delta = r^2 - 2 M r + a^2, ordered r_plus >= r_minus.
std::pair<double, double> horizon_radii(double mass, double spin);

struct MetricScalars {
  double delta; // r^2 - 2 M r + a^2
  double sigma; // r^2 + a^2 cos^2(theta)
  double mu;    // Delta / (r^2 + a^2)
  std::complex<double> kappa; // r - i a cos(theta)
};

double delta_of(const Background& bg, double r);
double mu_of(const Background& bg, double r);

// Requires r >= r_plus.
MetricScalars metric_scalars(const Background& bg, double r, double theta);

// Tortoise coordinate with dr*/dr = 1/mu and r*(3M) = 0. Requires r > r_plus.
double tortoise(const Background& bg, double r);
// Inverse map, monotone on (r_plus, infinity).
double tortoise_inverse(const Background& bg, double rstar);

// Azimuthal twist of the ingoing chart: phit = phi + alpha(r), alpha' = a/Delta,
// normalized alpha(3M) = 0. Identically zero for a = 0.
double ef_phase_twist(const Background& bg, double r);

// Height gauge H(r) = (2/mu) (r_plus/r)^2.  The slice time is tau = v - h with
// h'(r) = 2/mu - H, h(3M) = 0; slices are horizon-penetrating and reach scri.
struct HeightGauge {
  Background bg;
  double c0; // lim r^2 H = 2 r_plus^2
  double c1; // lim_{r->r_plus} (H - 2/mu)

  double H(double r) const;
  double hprime(double r) const; // 2/mu - H
  double h(double r) const;      // closed form, h(3M) = 0
  // mu*H = 2 (r_plus^2 + a^2 sigma...) -- for a=0 simply 2 sigma^2 with sigma = r_plus/r.
  double muH(double r) const;
};

HeightGauge height_gauge(const Background& bg);

enum class Chart { BoyerLindquist, EddingtonFinkelstein, Hyperboloidal };

// x0 is the chart time: t (BL), v (EF), or tau (hyperboloidal).
struct Point4 {
  double x0;
  double r;
  double theta;
  double phi;
};

// Converts among exterior charts.  BL-involved conversions require r > r_plus.
Point4 chart_convert(const Background& bg, const Point4& p, Chart from, Chart to);

} // namespace tailsim
