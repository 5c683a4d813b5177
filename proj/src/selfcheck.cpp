#include "tailsim/runner.hpp"

#include "tailsim/characteristic.hpp"
#include "tailsim/evolve.hpp"
#include "tailsim/hierarchy.hpp"
#include "tailsim/teukolsky.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace tailsim {

namespace {

struct Counter {
  SelfCheckReport::ModuleCount* mc;
  void check(bool ok) { ok ? ++mc->passed : ++mc->failed; }
};

} // namespace

SelfCheckReport self_check(bool print) {
  SelfCheckReport rep;
  auto module = [&](const char* name) {
    rep.modules.push_back({name, 0, 0});
    return Counter{&rep.modules.back()};
  };

  {
    Counter c = module("background");
    const Background bg = make_background(1.0, 0.0);
    c.check(bg.r_plus == 2.0 && bg.r_minus == 0.0);
    const Background bk = make_background(1.0, 0.6);
    c.check(std::abs(bk.r_plus - 1.8) < 1e-14 && std::abs(bk.r_minus - 0.2) < 1e-14);
    // horizon factorization on a sampled grid
    bool fact = true;
    for (int i = 0; i <= 100; ++i) {
      const double r = bk.r_plus + 0.37 * i;
      fact &= std::abs(delta_of(bk, r) - (r - bk.r_plus) * (r - bk.r_minus)) < 1e-12 * r * r;
    }
    c.check(fact);
    c.check(std::abs(tortoise(bg, 3.0)) < 1e-13);
    const HeightGauge g = height_gauge(bg);
    c.check(std::abs(g.c0 - 8.0) < 1e-13 && std::abs(g.c1 + 4.0) < 1e-13);
    // chart round-trips on fixed sample points
    bool charts = true;
    for (double r : {2.7, 5.0, 40.0}) {
      const Point4 p{1.3, r, 1.1, 0.7};
      const Point4 q = chart_convert(bg, chart_convert(bg, p, Chart::BoyerLindquist,
                                                       Chart::Hyperboloidal),
                                     Chart::Hyperboloidal, Chart::BoyerLindquist);
      charts &= std::abs(q.x0 - p.x0) < 1e-10 && std::abs(q.r - p.r) < 1e-12;
    }
    c.check(charts);
  }

  {
    Counter c = module("spinweight");
    c.check(eigenvalue_lambda(1, 1) == 2 && eigenvalue_lambda(-1, 1) == 0 &&
            eigenvalue_lambda(-1, 2) == 4);
    bool ladder = true;
    for (int s = -2; s <= 2; ++s)
      for (int l = std::abs(s); l <= 8; ++l) {
        if (l - 1 < std::abs(s - 1)) continue;
        const double prod = 2.0 * ladder_coefficients(s - 1, l).beta_raise *
                            ladder_coefficients(s, l).alpha_lower;
        ladder &= std::abs(prod + (l + s) * (l - s + 1.0)) < 1e-12;
      }
    c.check(ladder);
    // the Teukolsky-Starobinsky mode coefficient ties the two lowering steps
    bool tsi = true;
    for (int l = 1; l <= 8; ++l)
      tsi &= std::abs(tsi_mode_coefficient(l) - l * (l + 1.0)) < 1e-12;
    c.check(tsi);
    c.check(std::abs(evaluate_swsh({0, 0, 0}, 0.7, 0.2).real() -
                     1.0 / std::sqrt(4.0 * M_PI)) < 1e-14);
  }

  {
    Counter c = module("hierarchy");
    const HierarchySpec spec = hierarchy_coefficients(8);
    c.check(spec.x_of(1, 0).num == 3 && spec.x_of(1, 0).den == 1);
    c.check(spec.x_of(2, 0).num == -72 && spec.x_of(2, 0).den == 5); // -14.4
    bool cancel = true;
    for (int ip1 = 1; ip1 <= 8; ++ip1) {
      const int i = ip1 - 1;
      const Rational top = Rational(-1) * spec.x_of(ip1, i) *
                               Rational(HierarchySpec::f1(ip1) - HierarchySpec::f1(i)) +
                           Rational(HierarchySpec::g(ip1));
      cancel &= (top.num == 0);
      for (int j = 0; j < i; ++j) {
        const Rational e = Rational(-1) * spec.x_of(ip1, j) *
                               Rational(HierarchySpec::f1(ip1) - HierarchySpec::f1(j)) -
                           Rational(HierarchySpec::g(ip1)) * spec.x_of(i, j);
        cancel &= (e.num == 0);
      }
    }
    c.check(cancel);
  }

  {
    Counter c = module("equations");
    const Background bg = make_background(1.0, 0.0);
    auto grid = std::make_shared<RadialGrid>(make_radial_grid(bg, 128));
    const HeightGauge gauge = height_gauge(bg);
    bool finite = true, outflow = true, conj = true;
    try {
      const ModeOperator op = assemble_plus(bg, 1, gauge, grid, OperatorForm::Hyperboloidal);
      op.check_finite();
      for (int i : {0, grid->n - 1}) {
        const double disc = std::sqrt(op.a_ts[i] * op.a_ts[i] - 4.0 * op.a_tt[i] * op.a_ss[i]);
        const double c1 = (op.a_ts[i] - disc) / (2.0 * op.a_tt[i]);
        const double c2 = (op.a_ts[i] + disc) / (2.0 * op.a_tt[i]);
        outflow &= (i == 0) ? (c1 <= 1e-14 && c2 <= 1e-14) : (c1 >= -1e-14 && c2 >= -1e-14);
      }
      for (int i = 1; i < grid->n - 1; i += 7) {
        const double sg = grid->sigma[i];
        const double mu = 1.0 - sg;
        const auto raw = phi_form_coefficients(FieldKind::PlusType, bg, 1, sg);
        conj &= std::abs(op.a_t[i] - (raw.a_t + raw.a_ts / mu)) < 1e-10;
        conj &= std::abs(op.a_0[i] - (raw.a_0 + raw.a_s / mu + 2.0 * raw.a_ss / (mu * mu))) < 1e-10;
      }
    } catch (...) {
      finite = false;
    }
    c.check(finite);
    c.check(outflow);
    c.check(conj);
    // transcription agreement of the two master-operator forms
    ManufacturedField f;
    f.s = 1;
    f.m = 1;
    f.harmonic = true;
    f.omega = 0.31;
    f.profile = [](double r, double th) {
      return std::complex<double>(std::exp(-0.1 * (r - 6.0) * (r - 6.0)) * std::sin(th),
                                  0.1 * std::cos(th));
    };
    TeukGrid tg;
    tg.nr = 64;
    tg.ntheta = 32;
    const TeukolskyCheck chk = apply_teukolsky_operator(1, make_background(1.0, 0.5), f, tg);
    c.check(chk.max_difference < 1e-4 * std::max(1.0, chk.max_tme));
  }

  {
    Counter c = module("evolve");
    const Background bg = make_background(1.0, 0.0);
    auto grid = std::make_shared<RadialGrid>(make_radial_grid(bg, 128));
    const SystemOperators sys = make_system(bg, ModeIndex{-1, 1, 0}, grid,
                                            SystemKind::SpinMinusTriple);
    DataFamily fam;
    fam.kind = DataFamily::Kind::CompactBump;
    fam.amplitude = 0.0;
    HyperState st = make_initial_data(fam, sys.mode, sys);
    HyperEvolver ev(sys, st, 0.5, 0.01);
    for (int k = 0; k < 10; ++k) ev.step();
    bool zero = true;
    for (const auto& fd : ev.state().fields)
      for (double x : fd.f[0]) zero &= (x == 0.0);
    c.check(zero);
    bool cfl_guard = false;
    try {
      HyperState st2 = make_initial_data(fam, sys.mode, sys);
      step_hyperboloidal(st2, sys, 10.0);
    } catch (const std::invalid_argument&) {
      cfl_guard = true;
    }
    c.check(cfl_guard);
  }

  {
    Counter c = module("observe");
    TimeSeries s;
    for (int i = 0; i < 200; ++i) {
      const double t = 10.0 * std::pow(100.0, i / 199.0);
      s.push(t, std::pow(t, -4.0));
    }
    const TailFit fit = local_power_index(s);
    c.check(std::abs(fit.exponent - 4.0) < 1e-6);
    const ChargeRecord rec =
        charge(std::vector<std::complex<double>>(10, std::sqrt(4.0 * M_PI) * 2.0));
    c.check(std::abs(rec.q_e - 2.0) < 1e-14 && rec.max_relative_spread < 1e-14);
  }

  for (const auto& m : rep.modules) {
    rep.total_passed += m.passed;
    rep.total_failed += m.failed;
    if (print)
      std::printf("%-12s %d passed, %d failed\n", m.module.c_str(), m.passed, m.failed);
  }
  if (print)
    std::printf("self-check: %d passed, %d failed -> %s\n", rep.total_passed,
                rep.total_failed, rep.total_failed == 0 ? "OK" : "FAILURE");
  return rep;
}

} // namespace tailsim
