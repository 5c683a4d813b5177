// teukolsky.hpp -- transcription checks of the spin-weighted master wave
// operator on Kerr.  Two independently coded routes are applied to the same
// manufactured field: the classical separable form in Boyer-Lindquist
// coordinates, and the compact form built from the null-pair product
// -(r^2+a^2) Y V plus angular and lower-order terms.  Their difference on any
// smooth field vanishes at finite-difference truncation order.
#pragma once

#include "tailsim/background.hpp"
#include "tailsim/spinweight.hpp"

#include <complex>
#include <vector>

namespace tailsim {

// Manufactured field  f(r, theta) T(t) e^{i m phi}; time dependence is either
// harmonic, T = exp(-i omega t), or polynomial, T = sum_k c_k t^k.
struct ManufacturedField {
  int s = 1;
  int m = 0;
  bool harmonic = true;
  double omega = 0.0;
  std::vector<double> poly{1.0};       // used when !harmonic
  double t0 = 0.0;                     // evaluation time
  std::function<std::complex<double>(double, double)> profile; // f(r, theta)
};

struct TeukGrid {
  int nr = 64, ntheta = 32;
  double r_lo = 3.0, r_hi = 12.0;
  double theta_lo = 0.4, theta_hi = 2.7;
};

struct TeukolskyCheck {
  std::vector<std::complex<double>> residual_tme;    // nr x ntheta, row-major
  std::vector<std::complex<double>> residual_boxhat; // same layout
  double max_difference = 0.0; // sup |route A - route B|
  double max_tme = 0.0;
  double max_boxhat = 0.0;
};

// Requires |s| <= 2 and |a| < M; throws std::invalid_argument if the grid is
// too coarse for the 4th-order stencils.
TeukolskyCheck apply_teukolsky_operator(int s, const Background& bg,
                                        const ManufacturedField& field,
                                        const TeukGrid& grid);

} // namespace tailsim
