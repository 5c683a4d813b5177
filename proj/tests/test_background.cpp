#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tailsim/background.hpp"

#include <cmath>
#include <random>

using namespace tailsim;

namespace {

// Adaptive Simpson quadrature, used as an independent oracle for the tortoise
// integral and the height function.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 30) {
  auto simpson = [&](double x0, double x1) {
    const double xm = 0.5 * (x0 + x1);
    return (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(xm) + f(x1));
  };
  std::function<double(double, double, double, int)> rec =
      [&](double x0, double x1, double whole, int d) -> double {
    const double xm = 0.5 * (x0 + x1);
    const double left = simpson(x0, xm), right = simpson(xm, x1);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(x0, xm, left, d - 1) + rec(xm, x1, right, d - 1);
  };
  return rec(a, b, simpson(a, b), depth);
}

} // namespace

TEST_CASE("horizon radii") {
  auto [rp, rm] = horizon_radii(1.0, 0.0);
  CHECK(rp == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(rm == doctest::Approx(0.0).epsilon(1e-15));
  auto [rp2, rm2] = horizon_radii(1.0, 0.6);
  CHECK(rp2 == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(rm2 == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(horizon_radii(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(horizon_radii(1.0, -1.2), std::domain_error);
  CHECK_THROWS_AS(horizon_radii(0.0, 0.0), std::domain_error);
}

TEST_CASE("delta vanishes at both horizons") {
  for (double a : {0.0, 0.3, 0.6, 0.95}) {
    const Background bg = make_background(1.0, a);
    CHECK(std::abs(delta_of(bg, bg.r_plus)) < 1e-12 * bg.r_plus * bg.r_plus);
    CHECK(std::abs(delta_of(bg, bg.r_minus)) < 1e-12 * std::max(1.0, bg.r_minus * bg.r_minus));
  }
}

TEST_CASE("delta factorization on a sampled grid") {
  const Background bg = make_background(1.0, 0.7);
  for (int i = 0; i <= 200; ++i) {
    const double r = bg.r_plus + i * 0.5;
    const double fact = (r - bg.r_plus) * (r - bg.r_minus);
    CHECK(std::abs(delta_of(bg, r) - fact) < 1e-12 * r * r);
  }
}

TEST_CASE("metric scalars") {
  const Background bg = make_background(1.0, 0.0);
  CHECK(metric_scalars(bg, 2.0, 1.0).delta == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(metric_scalars(bg, 4.0, 0.7).mu == doctest::Approx(0.5).epsilon(1e-14));
  const Background bk = make_background(1.0, 0.8);
  // equatorial plane: Sigma = r^2 for any spin
  CHECK(metric_scalars(bk, 3.0, M_PI / 2).sigma == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(metric_scalars(bk, 3.0, 0.4).kappa.real() == doctest::Approx(3.0));
  CHECK(metric_scalars(bk, 3.0, 0.4).kappa.imag() ==
        doctest::Approx(-0.8 * std::cos(0.4)));
  CHECK_THROWS_AS(metric_scalars(bg, 1.5, 0.0), std::domain_error);
  // Sigma >= r_minus^2 > 0 outside the horizon
  CHECK(metric_scalars(bk, bk.r_plus, 0.0).sigma > 0.0);
}

TEST_CASE("tortoise coordinate") {
  const Background bg = make_background(1.0, 0.0);
  CHECK(tortoise(bg, 3.0) == doctest::Approx(0.0).epsilon(1e-14));
  // closed form r - 3M + 2M ln((r-2M)/M) at r = 4M, frozen from the
  // independent quadrature of 1/mu below
  const double expected = 1.0 + 2.0 * std::log(2.0);
  CHECK(tortoise(bg, 4.0) == doctest::Approx(expected).epsilon(1e-14));
  const double quad = adaptive_simpson([&](double r) { return 1.0 / mu_of(bg, r); },
                                       3.0, 4.0, 1e-13);
  CHECK(tortoise(bg, 4.0) == doctest::Approx(quad).epsilon(1e-10));
  CHECK_THROWS_AS(tortoise(bg, 2.0), std::domain_error);
}

TEST_CASE("tortoise monotone and consistent with 1/mu, including spin") {
  for (double a : {0.0, 0.5, 0.9}) {
    const Background bg = make_background(1.0, a);
    double prev = -1e300;
    for (int i = 0; i < 100; ++i) {
      const double r = bg.r_plus * (1.0 + 1e-3) + 0.17 * i;
      const double rs = tortoise(bg, r);
      CHECK(rs > prev);
      prev = rs;
      // centered finite difference of r* matches 1/mu; step shrinks with the
      // horizon distance so the truncation term stays controlled
      const double h = std::min(1e-5 * std::max(1.0, r), 1e-3 * (r - bg.r_plus));
      const double d = (tortoise(bg, r + h) - tortoise(bg, r - h)) / (2.0 * h);
      CHECK(d == doctest::Approx(1.0 / mu_of(bg, r)).epsilon(1e-6));
    }
  }
}

TEST_CASE("tortoise inverse round-trips") {
  for (double a : {0.0, 0.6}) {
    const Background bg = make_background(1.0, a);
    for (double rs : {-40.0, -5.0, 0.0, 3.7, 120.0}) {
      const double r = tortoise_inverse(bg, rs);
      // representing r as a plain double limits the achievable residual to
      // about eps * r / mu near the horizon (cancellation in r - r_plus)
      const double cond = 4.0 * 2.2e-16 * r / mu_of(bg, r);
      CHECK(std::abs(tortoise(bg, r) - rs) < 1e-10 * (1.0 + std::abs(rs)) + cond);
    }
  }
}

TEST_CASE("height gauge limits") {
  const Background bg = make_background(1.0, 0.0);
  const HeightGauge g = height_gauge(bg);
  CHECK(g.c0 == doctest::Approx(8.0).epsilon(1e-14)); // lim r^2 H, frozen from the symbolic limit
  CHECK(g.c1 == doctest::Approx(-4.0).epsilon(1e-14)); // lim (H - 2/mu) at the horizon
  // r^2 H within 1% of c0 for r > 1e3 M
  for (double r : {1e3 + 1, 1e4, 1e6}) {
    CHECK(std::abs(r * r * g.H(r) - g.c0) < 0.01 * g.c0);
  }
  // |H - 2/mu - c1| <= C mu on a log-spaced approach to the horizon
  double cbound = 0.0;
  for (double d = 1e-6; d <= 0.1; d *= 10.0) {
    const double r = bg.r_plus + d;
    const double val = std::abs(g.H(r) - 2.0 / mu_of(bg, r) - g.c1) / mu_of(bg, r);
    cbound = std::max(cbound, val);
  }
  CHECK(cbound < 20.0);
  // H positive on the exterior
  for (double r = 2.0 + 1e-9; r < 1e6; r *= 1.7) CHECK(g.H(r) > 0.0);
}

TEST_CASE("height function derivative matches 2/mu - H") {
  for (double a : {0.0, 0.55}) {
    const Background bg = make_background(1.0, a);
    const HeightGauge g = height_gauge(bg);
    for (double r : {bg.r_plus + 0.05, 3.0, 7.0, 40.0, 300.0}) {
      const double h = 1e-5 * std::max(1.0, r);
      const double d = (g.h(r + h) - g.h(r - h)) / (2.0 * h);
      CHECK(d == doctest::Approx(g.hprime(r)).epsilon(1e-8));
      CHECK(g.hprime(r) == doctest::Approx(2.0 / mu_of(bg, r) - g.H(r)).epsilon(1e-12));
    }
    CHECK(g.h(3.0 * bg.mass) == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("chart conversions are mutually inverse") {
  std::mt19937_64 rng(20240901u);
  std::uniform_real_distribution<double> ur(2.2, 80.0), ut(-50.0, 50.0),
      uth(0.1, M_PI - 0.1), uph(0.0, 2.0 * M_PI);
  for (double a : {0.0, 0.6}) {
    const Background bg = make_background(1.0, a);
    for (int k = 0; k < 1000; ++k) {
      Point4 p{ut(rng), ur(rng), uth(rng), uph(rng)};
      if (p.r <= bg.r_plus + 0.05) p.r = bg.r_plus + 0.1;
      for (Chart c1 : {Chart::BoyerLindquist, Chart::EddingtonFinkelstein, Chart::Hyperboloidal})
        for (Chart c2 : {Chart::BoyerLindquist, Chart::EddingtonFinkelstein, Chart::Hyperboloidal}) {
          const Point4 q = chart_convert(bg, chart_convert(bg, p, c1, c2), c2, c1);
          CHECK(std::abs(q.x0 - p.x0) < 1e-10);
          CHECK(std::abs(q.r - p.r) < 1e-12);
          CHECK(std::abs(q.phi - p.phi) < 1e-10);
        }
    }
  }
}

TEST_CASE("hyperboloidal time is v - h; zero twist at zero spin") {
  const Background bg = make_background(1.0, 0.0);
  const HeightGauge g = height_gauge(bg);
  Point4 p{5.0, 6.0, 1.2, 0.3}; // EF point
  const Point4 hyp = chart_convert(bg, p, Chart::EddingtonFinkelstein, Chart::Hyperboloidal);
  CHECK(hyp.x0 == doctest::Approx(5.0 - g.h(6.0)).epsilon(1e-14));
  CHECK(hyp.phi == doctest::Approx(p.phi).epsilon(1e-15));
  const Point4 bl = chart_convert(bg, p, Chart::EddingtonFinkelstein, Chart::BoyerLindquist);
  CHECK(bl.phi == doctest::Approx(p.phi).epsilon(1e-15)); // phit = phi when a = 0
  CHECK_THROWS_AS(chart_convert(bg, Point4{0.0, 1.9, 1.0, 0.0},
                                Chart::BoyerLindquist, Chart::EddingtonFinkelstein),
                  std::domain_error);
}
