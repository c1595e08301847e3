#pragma once

#include <cmath>

namespace cutloc {

/// Second-order truncated forward jet: a value together with its first and
/// second derivative with respect to the single independent variable t.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double t) { return {t, 1.0, 0.0}; }

  bool finite() const {
    return std::isfinite(value) && std::isfinite(d1) && std::isfinite(d2);
  }
};

inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.d1, -a.d2}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}

inline Jet2 operator*(double c, const Jet2& a) { return {c * a.value, c * a.d1, c * a.d2}; }

/// Compose a scalar function with a jet given f, f', f'' at the jet's value.
inline Jet2 chain(const Jet2& u, double f, double df, double ddf) {
  return {f, df * u.d1, ddf * u.d1 * u.d1 + df * u.d2};
}

inline Jet2 reciprocal(const Jet2& a) {
  const double r = 1.0 / a.value;
  return chain(a, r, -r * r, 2.0 * r * r * r);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

inline Jet2 exp(const Jet2& u) {
  const double e = std::exp(u.value);
  return chain(u, e, e, e);
}

inline Jet2 log(const Jet2& u) {
  const double r = 1.0 / u.value;
  return chain(u, std::log(u.value), r, -r * r);
}

inline Jet2 sqrt(const Jet2& u) {
  const double s = std::sqrt(u.value);
  return chain(u, s, 0.5 / s, -0.25 / (s * u.value));
}

inline Jet2 sin(const Jet2& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return chain(u, s, c, -s);
}

inline Jet2 cos(const Jet2& u) {
  const double s = std::sin(u.value), c = std::cos(u.value);
  return chain(u, c, -s, -c);
}

inline Jet2 sinh(const Jet2& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return chain(u, s, c, s);
}

inline Jet2 cosh(const Jet2& u) {
  const double s = std::sinh(u.value), c = std::cosh(u.value);
  return chain(u, c, s, c);
}

inline Jet2 tanh(const Jet2& u) {
  const double th = std::tanh(u.value);
  const double sech2 = 1.0 - th * th;
  return chain(u, th, sech2, -2.0 * th * sech2);
}

/// Integer power by the generalized chain rule (n may be negative).
inline Jet2 pow(const Jet2& u, int n) {
  if (n == 0) return Jet2::constant(1.0);
  const double v = u.value;
  const double f = std::pow(v, n);
  const double df = n * std::pow(v, n - 1);
  const double ddf = (n == 1) ? 0.0 : n * (n - 1) * std::pow(v, n - 2);
  return chain(u, f, df, ddf);
}

}  // namespace cutloc
