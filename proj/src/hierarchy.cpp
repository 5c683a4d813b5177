#include "tailsim/hierarchy.hpp"

#include <numeric>

namespace tailsim {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  if (d < 0) { n = -n; d = -d; }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::domain_error("Rational: division by zero");
  return Rational(num * o.den, den * o.num);
}

const Rational& HierarchySpec::x_of(int i, int j) const {
  if (i < 1 || i > i_max || j < 0 || j >= i)
    throw std::out_of_range("HierarchySpec: x index out of table");
  return x[i][j];
}

HierarchySpec hierarchy_coefficients(int i_max) {
  if (i_max < 0) throw std::domain_error("hierarchy_coefficients: i_max must be >= 0");
  if (i_max > 12) throw std::domain_error("hierarchy_coefficients: table limited to i_max <= 12");
  HierarchySpec spec;
  spec.i_max = i_max;
  spec.x.resize(i_max + 1);
  for (int ip1 = 1; ip1 <= i_max; ++ip1) {
    const int i = ip1 - 1;
    spec.x[ip1].resize(ip1);
    // top entry x_{i+1,i} = (i+1)(i+3), equal to g_{i+1} / (f1(i+1) - f1(i))
    spec.x[ip1][i] = Rational(std::int64_t(i + 1) * (i + 3));
    for (int j = i - 1; j >= 0; --j) {
      const Rational denom(HierarchySpec::f1(ip1) - HierarchySpec::f1(j));
      spec.x[ip1][j] = Rational(-HierarchySpec::g(ip1)) * spec.x[i][j] / denom;
    }
  }
  return spec;
}

} // namespace tailsim
