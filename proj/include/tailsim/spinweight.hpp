// spinweight.hpp -- spin-weighted spherical harmonics, edth ladder algebra,
// and mode projection.  The angular sector that reduces the field equations
// to radial ones.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace tailsim {

struct ModeIndex {
  int s = 0; // spin weight, |s| <= 2
  int l = 0; // harmonic degree, l >= |s|
  int m = 0; // azimuthal order, |m| <= l
};

// Throws std::domain_error on violated index ranges.
void validate_mode(const ModeIndex& mode);

// Lambda = (l+s)(l-s+1); eigenvalue of -2 edth edth' on spin weight s, degree l.
int eigenvalue_lambda(int s, int l);

// One-mode action of the edth ladder:
//   edth' : s -> s-1 with coefficient alpha_lower,
//   edth  : s -> s+1 with coefficient beta_raise.
// Phase convention is fixed here once; every downstream sign flows from this
// table.  2 * beta_raise(s-1,l) * alpha_lower(s,l) = -(l+s)(l-s+1) exactly.
struct LadderCoefficients {
  int lambda;
  double alpha_lower;
  double beta_raise;
};

LadderCoefficients ladder_coefficients(int s, int l);

namespace test_hooks {
// Flips the sign of alpha_lower; exists so the self-check can demonstrate
// that a ladder-sign defect is caught by the TSI coefficient identity.
extern int ladder_sign;
} // namespace test_hooks

// Wigner small-d matrix element d^l_{mp,m}(beta).
double wigner_d(int l, int mp, int m, double beta);

// Spin-weighted spherical harmonic, orthonormal on the unit sphere.
std::complex<double> evaluate_swsh(const ModeIndex& mode, double theta, double phi);

// Applies the edth / edth' differential formula to a function g(theta) e^{i m phi}
// of spin weight s, using a centered finite difference for the theta derivative.
// Returns the (theta-dependent) coefficient of e^{i m phi} in the image.
std::complex<double> edth_fd(const std::function<std::complex<double>(double)>& g,
                             int s, int m, double theta, double h = 1e-5);
std::complex<double> edthp_fd(const std::function<std::complex<double>(double)>& g,
                              int s, int m, double theta, double h = 1e-5);

// Gauss-Legendre nodes and weights on [-1, 1].
struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};
Quadrature gauss_legendre(int n);

// Product quadrature grid for band limit lmax: Gauss-Legendre in cos(theta),
// uniform in phi.
struct SphereGrid {
  int lmax;
  std::vector<double> theta;   // GL nodes
  std::vector<double> wtheta;  // GL weights (already in cos(theta) measure)
  std::vector<double> phi;     // uniform nodes
  double wphi;                 // 2 pi / n_phi
};
SphereGrid make_sphere_grid(int lmax);

// Inner product of f against Y^s_{lm}; exact for band-limited f.  The grid must
// resolve the requested degree (grid.lmax >= mode.l), else std::invalid_argument.
std::complex<double> project_mode(
    const std::function<std::complex<double>(double, double)>& f,
    const ModeIndex& mode, const SphereGrid& grid);

} // namespace tailsim
