// characteristic.hpp -- independent double-null integrator on the
// (u, v) = ((t - r*)/2, (t + r*)/2) lattice, where d_u is mu Y and d_v is V.
// Serves as the oracle for the hyperboloidal scheme and as the
// Maxwell-consistency harness: the base spin -1 scalar and its first
// hierarchy scalar march as coupled waves, the middle component follows
// algebraically, and the spin +1 scalar transports along u with the middle
// component as source.
#pragma once

#include "tailsim/evolve.hpp"

#include <complex>

namespace tailsim {

using cplx = std::complex<double>;

struct DiamondSpec {
  double u0 = 0.0;
  double v0 = 0.0;
  double h = 0.0625; // du = dv
  int nu = 0;
  int nv = 0;
  int ell = 1;
  double charge = 0.0;        // middle-component monopole q_E + i q_B (real input)
  bool evolve_chi = true;     // transport the spin +1 scalar
  bool store_full = false;    // keep the full lattice (residual studies)
  double rstar_cutoff = -60.0;
  std::vector<double> observer_radii;
};

// Evolved variables sampled along one initial cone.
struct ConeFunction {
  std::vector<cplx> phi0; // Delta psi_minus / r
  std::vector<cplx> phi1; // weighted outgoing derivative of phi0
  std::vector<cplx> chi;  // psi_plus / r
};

// sqrt(l(l+1)) expressed through the ladder table so every sign stays tied to
// one harmonic convention.
double mode_lambda_root(int ell);

// Middle and spin +1 components from free spin -1 data on a u = const cone
// (4th-order one-sided differences along the cone).  r_of[j] is the area
// radius at the cone nodes, spaced by dr* = h in the tortoise coordinate.
struct ReconstructedCone {
  std::vector<cplx> psi0;
  std::vector<cplx> psip;
  ConeFunction evolved; // same data in the evolved variables
};
ReconstructedCone reconstruct_middle_on_cone(const std::vector<cplx>& psim,
                                             const std::vector<double>& r_of,
                                             double h, const Background& bg, int ell);

struct DiamondSolution {
  DiamondSpec spec;
  Background bg;
  std::vector<double> r_diag; // r at diagonal d = j - i, index d + nu - 1
  bool clipped = false;       // some lattice radii hit the tortoise cutoff

  struct Series {
    double r = 0.0;
    std::vector<double> tau;
    std::vector<cplx> psim, psi0, psip;
    std::vector<cplx> psi00; // middle-component monopole (carries the charge)
  };
  std::vector<Series> observers;

  // full lattice, index i * nv + j, present when store_full
  std::vector<cplx> full_phi0, full_phi1, full_chi;

  double r_at(int i, int j) const { return r_diag[(j - i) + spec.nu - 1]; }
  cplx at(const std::vector<cplx>& a, int i, int j) const { return a[size_t(i) * spec.nv + j]; }
};

// cone data on u = u0 over nv nodes and on v = v0 over nu nodes (the latter
// zero by default per the data families).
DiamondSolution evolve_characteristic(const ConeFunction& ucone,
                                      const ConeFunction& vcone,
                                      const DiamondSpec& spec, const Background& bg);

// u-cone radii r(v_j) for a spec (tortoise spacing h from the corner).
std::vector<double> ucone_radii(const DiamondSpec& spec, const Background& bg);
std::vector<double> vcone_radii(const DiamondSpec& spec, const Background& bg);

// Compactly supported spin -1 cone data from the bump family, reconstructed
// into the full Maxwell triple.
ConeFunction cone_from_family(const DataFamily& family, const DiamondSpec& spec,
                              const Background& bg);

// Residual sup norms of the four first-order Maxwell subequations on the
// stored lattice, restricted to nodes with r >= r_min and two nodes away from
// the edges.
struct FirstOrderResiduals {
  double angular_plus = 0.0;  // middle component from the ingoing derivative of psi_plus
  double angular_minus = 0.0; // middle component from the outgoing derivative of psi_minus
  double radial_plus = 0.0;   // outgoing derivative of the middle vs psi_plus
  double radial_minus = 0.0;  // ingoing derivative of the middle vs psi_minus
  double max() const;
};
FirstOrderResiduals first_order_residuals(const DiamondSolution& sol, double r_min);

// Sup norm of the per-mode Teukolsky-Starobinsky residual
// l(l+1) Phi_plus - Phi_minus^(2) over the stored lattice (r >= r_min).
double tsi_residual_diamond(const DiamondSolution& sol, double r_min);

} // namespace tailsim
