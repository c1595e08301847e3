#include "cutloc/lambda_family.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cutloc/errors.hpp"

namespace cutloc::lambda {

namespace {

using std::numbers::pi;

void check_nu(const LambdaParams& p, double nu) {
  if (!(nu > 1.0 / std::sqrt(p.lambda) && nu < 1.0))
    throw OutOfRange("nu=" + std::to_string(nu) + " outside (1/sqrt(lambda), 1)");
}

}  // namespace

LambdaParams::LambdaParams(double l) : lambda(l) {
  if (!(l > 1.0)) throw OutOfRange("lambda must exceed 1, got " + std::to_string(l));
}

double h(const LambdaParams& p, double t) {
  const double sh = std::sinh(t);
  return 1.0 + p.lambda * sh * sh;
}

Jet2 m_closed(const LambdaParams& p, double t) {
  const double l = p.lambda;
  const double th = std::tanh(t);
  // 1/cosh² computed without overflow for large |t|
  const double sech2 = 1.0 - th * th;
  const double value = 1.0 / std::sqrt(sech2 + l * th * th);
  if (std::abs(t) > 300.0) return {value, 0.0, 0.0};
  const double hh = h(p, t);
  const double dh = 2.0 * l * std::sinh(t) * std::cosh(t);
  const double d1 = (1.0 - l) * value * th / hh;
  const double d2 = (1.0 - l) * value * ((1.0 - l) * th * th + hh * sech2 - dh * th) / (hh * hh);
  return {value, d1, d2};
}

double curvature_closed(const LambdaParams& p, double t) {
  const double hh = h(p, t);
  return (p.lambda - 1.0) * (3.0 / (hh * hh) - 2.0 / hh);
}

double phi_closed(const LambdaParams& p, double nu) {
  check_nu(p, nu);
  const double l = p.lambda;
  return pi * (-std::sqrt(l - 1.0) + l * nu / std::sqrt(l * nu * nu - 1.0));
}

double phi_prime_closed(const LambdaParams& p, double nu) {
  check_nu(p, nu);
  const double l = p.lambda;
  const double q = l * nu * nu - 1.0;
  return -pi * l / (q * std::sqrt(q));
}

double phi_prime_printed(const LambdaParams& p, double nu) {
  check_nu(p, nu);
  const double l = p.lambda;
  const double q = l * nu * nu - 1.0;
  return -pi * (1.0 / (2.0 * std::sqrt(l - 1.0)) + l / (q * std::sqrt(q)));
}

double nu_pi_closed(const LambdaParams& p) {
  const double l = p.lambda;
  if (l <= 2.0) return 1.0;
  // λν/√(λν²−1) = c with c = 1 + √(λ−1)  ⇒  ν² = c² / (λ(c² − λ))
  const double c = 1.0 + std::sqrt(l - 1.0);
  return c / std::sqrt(l * (c * c - l));
}

double xi_closed(const LambdaParams& p, double nu) {
  check_nu(p, nu);
  const double l = p.lambda;
  return std::asinh(std::sqrt((1.0 - nu * nu) / (l * nu * nu - 1.0)));
}

double t_pi_closed(const LambdaParams& p) {
  if (p.lambda <= 2.0) return 0.0;
  return xi_closed(p, nu_pi_closed(p));
}

double integral_identity_rhs(double a, double b) {
  if (!(a > 0.0 && a < b && b < 1.0)) throw OutOfRange("integral_identity_rhs needs 0 < a < b < 1");
  const double c = std::sqrt((b - a) / (1.0 - a));
  return pi / (a * (1.0 - a)) * ((a - 1.0) / std::sqrt(b) + 1.0 / c);
}

}  // namespace cutloc::lambda
