// observe.hpp -- measurements: weighted slice energies, Newman-Penrose
// constants, charges, stationary subtraction, and late-time power-law fits.
#pragma once

#include "tailsim/evolve.hpp"
#include "tailsim/hierarchy.hpp"

#include <complex>
#include <optional>

namespace tailsim {

// ---------------------------------------------------------------------------
// time series and tail fits

struct TimeSeries {
  std::vector<double> tau;
  std::vector<std::complex<double>> val;
  std::vector<int> flags; // bit 0: below the round-off floor

  void push(double t, std::complex<double> v) {
    tau.push_back(t);
    val.push_back(v);
    flags.push_back(0);
  }
};

// Flags samples whose magnitude falls below 1e3 * eps times the running
// maximum; fits never use flagged samples.
void apply_floor_flags(TimeSeries& s);

// Running local power index -d ln|f| / d ln tau on the raw samples (centered
// in log tau); NaN at endpoints and flagged samples.
std::vector<double> running_lpi(const TimeSeries& s);

struct FitOptions {
  double window_lo_frac = 0.5; // default window [0.5 tau_end, tau_end]
  double tau_a = -1.0;         // explicit window override
  double tau_b = -1.0;
  int resample = 200;
};

struct TailFit {
  double tau_a = 0.0, tau_b = 0.0;
  double exponent = 0.0;
  double residual = 0.0; // max |LPI - exponent| over the fit third
  bool ringing_advanced = false;
  bool floored = false; // window limited by floor flags
  std::vector<double> tau_s, lpi_s; // log-spaced LPI resample
  double lpi_at(double tau) const;  // nearest resampled value
};

// Requires >= 50 unflagged samples spanning a factor >= 2 in tau inside the
// window; windows open with quasinormal ringing are advanced past the last
// zero crossing of the real or imaginary part.
TailFit local_power_index(const TimeSeries& s, const FitOptions& opt = {});

// ---------------------------------------------------------------------------
// slice energies

enum class EnergySelector { PsiPlusField, PsiMinusPair, PhiTildeTop };

struct EnergySpec {
  int k = 0;    // regularity order, 0 or 1
  double p = 0; // radial weight; [0,2] for the field selectors, [0,5) for the top
  EnergySelector which = EnergySelector::PsiPlusField;
};

// Radial quadrature of the per-mode reduction of the weighted norms with the
// derivative set {Y, rV, ladder-weighted angular}.  Nonnegative.
double energy_F(const HyperState& state, const EnergySpec& spec,
                const SystemOperators& sys);

// ---------------------------------------------------------------------------
// Newman-Penrose constants

struct NPConstantRecord {
  int index = 1;
  std::vector<double> tau;
  std::vector<std::complex<double>> value;
  int extrapolation_order = 2;
  bool flagged = false;
  double relative_drift(double tau_lo, double tau_hi) const;
};

// Value at one slice: the weighted outgoing derivative of the top decoupled
// hierarchy scalar, Richardson-extrapolated in 1/r to scri, cross-checked
// against the scri node.  spin is +1 or -1.
std::complex<double> np_constant(const HyperState& state, int index, int spin,
                                 const SystemOperators& sys,
                                 const HierarchySpec& hspec, bool* flagged = nullptr);

// ---------------------------------------------------------------------------
// charges

struct ChargeRecord {
  double q_e = 0.0, q_b = 0.0;
  double max_relative_spread = 0.0;
  int samples = 0;
};

// Input: samples of the middle-component monopole coefficient (the Y^0_00
// coefficient of the middle scalar) over spheres and times.
ChargeRecord charge(const std::vector<std::complex<double>>& monopole_coeffs);

// phi_0 - phi_0^sta = (psi_0 - (q_E + i q_B)) / r^2 per sample, for a series
// of middle-component values at a fixed radius.
TimeSeries stationary_subtraction(const TimeSeries& psi0_values,
                                  std::complex<double> q, double r);

} // namespace tailsim
