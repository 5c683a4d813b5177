// operators.hpp -- per-mode radial operators on Schwarzschild in hyperboloidal
// and double-null form, the outgoing-derivative hierarchy operator, and the
// per-mode Teukolsky-Starobinsky residual.
//
// Hyperboloidal radial variable: sigma = r_plus / r on [0, 1], scri at 0,
// horizon at 1.  With mu = 1 - sigma and the height gauge H = 2 sigma^2 / mu,
//   Y = (sigma^2/r_plus) d_sigma + 2 (1+sigma) d_tau        (ingoing, regular)
//   V = -(mu sigma^2 / r_plus) d_sigma + 2 sigma^2 d_tau    (outgoing, regular)
// The spin +1 scalar and the second hierarchy scalar of spin -1 blow up like
// 1/mu at the horizon, so their evolved partners carry one factor of mu; the
// assembled operator for them is the exact mu-conjugate of the raw form and
// is finite on the whole closed interval.
#pragma once

#include "tailsim/background.hpp"
#include "tailsim/spinweight.hpp"

#include <memory>
#include <span>
#include <vector>

namespace tailsim {

struct RadialGrid {
  Background bg;
  int n = 0;
  double dsigma = 0.0;
  std::vector<double> sigma; // uniform, includes 0 and 1

  double r_of(double s) const { return bg.r_plus / s; } // infinite at s = 0
};

// N >= 64 nodes, 4th-order interior stencils, one-sided closures at the ends.
RadialGrid make_radial_grid(const Background& bg, int n);

// Finite differences on a uniform grid (4th order; one-sided at the edges).
void fd_d1(std::span<const double> f, std::span<double> out, double h);
void fd_d2(std::span<const double> f, std::span<double> out, double h);
double fd_d1_at(std::span<const double> f, int i, double h);
double fd_d2_at(std::span<const double> f, int i, double h);
// Kreiss-Oliger style 6th-derivative filter, u += (eps/64) * stencil(u),
// interior nodes only.
void ko_filter(std::span<double> f, double eps, std::vector<double>& scratch);

enum class OperatorForm { Hyperboloidal, DoubleNull };

enum class FieldKind {
  PlusType, // spin +1 scalar family and the second spin -1 hierarchy scalar
  Minus0,   // base spin -1 scalar (radiation field at scri)
  Minus1    // first spin -1 hierarchy scalar
};

// Assembled second-order operator  a_tt d_tt + a_ts d_ts + a_ss d_ss +
// a_t d_t + a_s d_s + a_0 + coupling * (source field)  on the sigma grid,
// plus the same tables divided by -a_tt for the method-of-lines update.
struct ModeOperator {
  OperatorForm form = OperatorForm::Hyperboloidal;
  FieldKind kind = FieldKind::PlusType;
  int ell = 1;
  bool radiation_scaled = false; // true when the evolved field carries mu
  std::shared_ptr<const RadialGrid> grid;

  std::vector<double> a_tt, a_ts, a_ss, a_t, a_s, a_0, coupling;
  // divided tables: d_tau pi = q_dpi D(pi) + q_d2f DD(f) + q_df D(f)
  //                          + q_pi pi + q_f f + q_src src
  std::vector<double> q_dpi, q_d2f, q_df, q_pi, q_f, q_src;

  void check_finite() const; // throws on any non-finite node
};

// Characteristic speeds d sigma / d tau of the first-order reduction; these
// are gauge-exact closed forms shared by every assembled operator here.
double char_speed_out(const Background& bg, double sigma);  // -(1-sigma)/(2 r_plus)
double char_speed_in(const Background& bg, double sigma);   // sigma^2/(2 r_plus (1+sigma))
double max_char_speed(const Background& bg);                // 1/(2 r_plus)

// Raw (unrescaled) hyperboloidal coefficients of the second-order form for a
// given field kind; the PlusType entries diverge at sigma = 1.
struct PhiFormCoefficients {
  double a_tt, a_ts, a_ss, a_t, a_s, a_0;
};
PhiFormCoefficients phi_form_coefficients(FieldKind kind, const Background& bg,
                                          int ell, double sigma);

// Double-null coefficients of d_u d_v phi = c_v(r) d_v phi + c_0(r) phi
// + c_src(r) * source.
double dn_coeff_v(FieldKind kind, const Background& bg, double r);
double dn_coeff_0(FieldKind kind, const Background& bg, int ell, double r);
double dn_coeff_src(FieldKind kind, const Background& bg, double r);

// Coefficients of the generic wave-equation template
//   (wave operator) phi = b_V V phi + b_phi d_phit phi + b_0 phi + source:
// b_V grows like b_V1 * r with b_V1 = 2 for the plus-type scalars and 0 for
// the minus pair; b_0 tends to -2 resp. +2.
struct WaveTemplate {
  double b_V, b_phi, b_0;
};
WaveTemplate wave_template(FieldKind kind, const Background& bg, double r);

// Requires bg.schwarzschild() and ell >= 1; Kerr assembly is unsupported.
ModeOperator assemble_plus(const Background& bg, int ell, const HeightGauge& gauge,
                           std::shared_ptr<const RadialGrid> grid, OperatorForm form);

struct MinusSystem {
  ModeOperator op0; // base scalar, sourced by the first hierarchy scalar
  ModeOperator op1; // first hierarchy scalar, closed
  ModeOperator op2; // second hierarchy scalar, mu-rescaled, closed plus-type
};
MinusSystem assemble_minus_system(const Background& bg, int ell,
                                  const HeightGauge& gauge,
                                  std::shared_ptr<const RadialGrid> grid,
                                  OperatorForm form);

// Discrete weighted outgoing derivative (r^2+a^2)^2/Delta V applied to a slice
// field given by (f, df/dtau).  In sigma form this is
//   -r_plus D_sigma f + (2 r_plus^2 / mu) fdot,
// finite at the horizon only when fdot vanishes there; the horizon node is
// flagged and filled by extrapolation when it does not.
struct CurlyVrResult {
  std::vector<double> value;
  bool horizon_extrapolated = false;
};
CurlyVrResult apply_curlyVR(std::span<const double> f, std::span<const double> fdot,
                            const RadialGrid& grid);

// Per-mode Teukolsky-Starobinsky residual  c * phi_plus - phi_minus2 with
// c = 2 alpha_lower(0,l) alpha_lower(1,l) (= l(l+1) in this convention).
std::vector<double> tsi_residual(std::span<const double> phi_plus,
                                 std::span<const double> phi_minus2, int ell);
double tsi_mode_coefficient(int ell);

} // namespace tailsim
