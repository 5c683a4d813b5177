// evolve.hpp -- hyperboloidal method-of-lines evolution of the per-mode
// radial systems: classical RK4 in tau, 4th-order finite differences in
// sigma, Kreiss-Oliger filtering, initial-data families, and the hierarchy
// constraint monitor.
#pragma once

#include "tailsim/operators.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>

namespace tailsim {

enum class FieldId { PsiPlus, PhiMinus0, PhiMinus1, PhiMinus2W };
const char* field_name(FieldId id);

enum class SystemKind { SpinPlus, SpinMinusTriple };

struct SystemOperators {
  Background bg;
  HeightGauge gauge;
  std::shared_ptr<const RadialGrid> grid;
  ModeIndex mode;
  SystemKind kind = SystemKind::SpinMinusTriple;
  std::vector<FieldId> ids;
  std::vector<ModeOperator> ops;
  std::vector<int> source_of; // index into ids, or -1

  int index_of(FieldId id) const;
};

SystemOperators make_system(const Background& bg, const ModeIndex& mode,
                            std::shared_ptr<const RadialGrid> grid, SystemKind kind);

// Evolved state on one slice: complex profiles stored as one or two real
// channels (the coefficients are real, so the channels never mix).
struct HyperState {
  double tau = 0.0;
  ModeIndex mode;
  int channels = 1;
  struct FieldData {
    std::array<std::vector<double>, 2> f;
    std::array<std::vector<double>, 2> pi;
  };
  std::vector<FieldId> ids;
  std::vector<FieldData> fields;

  int index_of(FieldId id) const;
  const FieldData& of(FieldId id) const { return fields[index_of(id)]; }
  FieldData& of(FieldId id) { return fields[index_of(id)]; }
};

struct DataFamily {
  enum class Kind { CompactBump, NpcCharged, MonopoleCharge };
  Kind kind = Kind::CompactBump;
  double amplitude = 1.0; // A
  double center = 6.0;    // r_c
  double width = 0.25;    // w; the profile vanishes outside [r_c-4w, r_c+4w]
  double n_inf = 1.0;     // target limit of the weighted outgoing derivative
  double cutoff = 40.0;   // tail switched on beyond this radius
  double charge = 0.0;    // q (characteristic middle-component monopole)
};

// Smooth compactly supported bump, value 1 at the center, support |x| < 1.
double bump_c_inf(double x);
double bump_c_inf_d1(double x);
double bump_c_inf_d2(double x);

// Time-symmetric slice data; for the spin -1 system the hierarchy partners
// are built with the discrete weighted outgoing derivative so the constraints
// start at truncation level.
HyperState make_initial_data(const DataFamily& family, const ModeIndex& mode,
                             const SystemOperators& sys);

// Divides a slice profile by mu = 1 - sigma; the horizon node is filled by
// quadratic extrapolation (the numerator vanishes there for regular fields).
std::vector<double> divide_by_mu(std::span<const double> f, const RadialGrid& grid);

// d_tautau of a field pair under its operator (solved second-order form).
std::vector<double> second_tau_derivative(const ModeOperator& op,
                                          std::span<const double> f,
                                          std::span<const double> pi,
                                          const double* src);

struct StepHooks {
  std::function<void(double /*tau*/, const HyperState&)> pre_step;
  std::function<void(double /*tau*/, const HyperState&)> post_step;
};

class HyperEvolver {
 public:
  HyperEvolver(const SystemOperators& sys, HyperState init, double cfl,
               double dissipation);

  double dt() const { return dt_; }
  double tau() const { return state_.tau; }
  const HyperState& state() const { return state_; }
  const SystemOperators& system() const { return *sys_; }

  void step();
  // Runs until tau_end, calling hooks every step; throws on non-finite data
  // (after writing a diagnostic slice dump to stderr) and on inflow speeds.
  void run_until(double tau_end, const StepHooks& hooks = {});

  // outflow assertion: recomputes the boundary characteristic speeds from the
  // operator tables and checks their signs
  void check_outflow() const;
  void check_finite() const;

 private:
  const SystemOperators* sys_;
  HyperState state_;
  double dt_ = 0.0;
  double dissipation_ = 0.0;
  int steps_since_check_ = 0;
  // workspace: per field, per channel; stage inputs ping-pong between a and b
  struct Work {
    std::vector<double> fa, pia, fb, pib, facc, piacc;
  };
  std::vector<std::array<Work, 2>> work_;
  std::vector<double> scratch_;
};

// One validated RK4 step: dt must respect dt <= cfl_limit = dsigma / smax.
void step_hyperboloidal(HyperState& state, const SystemOperators& sys, double dt,
                        double dissipation = 0.0);

struct ConstraintDrift {
  double c0_abs = 0.0, c0_rel = 0.0; // first hierarchy relation
  double c1_abs = 0.0, c1_rel = 0.0; // second hierarchy relation (mu-weighted)
};
// Slice norms of the hierarchy definitional relations for the spin -1 system;
// the horizon node of the first relation is excluded (0/0 limit there).
ConstraintDrift constraint_drift(const HyperState& state, const SystemOperators& sys);

} // namespace tailsim
