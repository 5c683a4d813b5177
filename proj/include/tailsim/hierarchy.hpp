// hierarchy.hpp -- coefficient tables of the outgoing-derivative hierarchy and
// the tilde decoupling transform that exposes the Newman-Penrose constants.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tailsim {

// Exact rational with 64-bit parts; the tables here stay tiny.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d);

  double value() const { return double(num) / double(den); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

// f1(i) = (i+1)(i+2),  f2(i) = -2(i+2),  g(i) = 2 i (i+1)(i+2),
// x_{i+1,i} = (i+1)(i+3),  x_{i+1,j} = -g_{i+1} x_{i,j} / (f1(i+1) - f1(j)).
struct HierarchySpec {
  int i_max = 0;
  std::vector<std::vector<Rational>> x; // x[i][j] = x_{i,j}, valid for 1 <= i, 0 <= j < i

  static std::int64_t f1(int i) { return std::int64_t(i + 1) * (i + 2); }
  static std::int64_t f2(int i) { return -2 * std::int64_t(i + 2); }
  static std::int64_t g(int i) { return 2 * std::int64_t(i) * (i + 1) * (i + 2); }

  const Rational& x_of(int i, int j) const;
};

HierarchySpec hierarchy_coefficients(int i_max);

// tilde[0] = plain[0];
// tilde[i+1] = plain[i+1] + sum_{j<=i} x_{i+1,j} M^{i+1-j} tilde[j].
// The spin -1 chain uses the same table with its levels counted from the base
// scalar (index 2 in the field family), so callers pass levels above the base.
template <class Vec>
std::vector<Vec> tilde_transform(const std::vector<Vec>& plain,
                                 const HierarchySpec& spec, double mass) {
  if (plain.empty()) return {};
  if (int(plain.size()) - 1 > spec.i_max)
    throw std::invalid_argument("tilde_transform: table too small for the chain");
  std::vector<Vec> tilde;
  tilde.reserve(plain.size());
  tilde.push_back(plain[0]);
  for (int i = 1; i < int(plain.size()); ++i) {
    Vec next = plain[i];
    for (int j = 0; j <= i - 1; ++j) {
      const double c = spec.x_of(i, j).value() * std::pow(mass, i - j);
      if constexpr (requires { next.size(); }) {
        for (size_t k = 0; k < next.size(); ++k) next[k] += c * tilde[j][k];
      } else {
        next += c * tilde[j];
      }
    }
    tilde.push_back(std::move(next));
  }
  return tilde;
}

} // namespace tailsim
