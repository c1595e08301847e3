#pragma once

#include "cutloc/jet.hpp"

// Closed forms for m_λ(t) = cosh t / √(1 + λ sinh²t). Nothing here calls a
// quadrature or the expression evaluator, so a disagreement with the
// numerical modules always points at the numerical side.
namespace cutloc::lambda {

struct LambdaParams {
  double lambda;
  /// Throws OutOfRange unless λ > 1.
  explicit LambdaParams(double l);
};

/// h(t) = 1 + λ sinh²t.
double h(const LambdaParams& p, double t);

/// m, m′ = (1−λ) m tanh t / h, and
/// m″ = (1−λ) m ((1−λ) tanh²t + h/cosh²t − h′ tanh t) / h².
Jet2 m_closed(const LambdaParams& p, double t);

/// G = (λ−1)(3/h² − 2/h).
double curvature_closed(const LambdaParams& p, double t);

/// φ(ν) = π(−√(λ−1) + λν/√(λν²−1)) for 1/√λ < ν < 1. Throws OutOfRange.
double phi_closed(const LambdaParams& p, double nu);

/// dφ/dν = −πλ / (λν²−1)^{3/2}.
double phi_prime_closed(const LambdaParams& p, double nu);

/// The derivative as printed alongside the closed form,
/// −π(1/(2√(λ−1)) + λ/√(λν²−1)³). It does not match dφ/dν and is kept only
/// so the mismatch can be reported.
double phi_prime_printed(const LambdaParams& p, double nu);

/// ν at which φ(ν) = π, or 1 (the top of the domain) when φ > π throughout,
/// which happens exactly for λ ≤ 2.
double nu_pi_closed(const LambdaParams& p);

/// t_π from sinh²t = (1−ν²)/(λν²−1) at ν = nu_pi_closed; 0 for λ ≤ 2.
double t_pi_closed(const LambdaParams& p);

/// ξ(ν) = asinh √((1−ν²)/(λν²−1)).
double xi_closed(const LambdaParams& p, double nu);

/// Right side of ∫_b^1 dx / (x(x−a)√((x−b)(1−x))) = π/(a(1−a)) ((a−1)/√b + 1/c),
/// c = √((b−a)/(1−a)), for 0 < a < b < 1. Throws OutOfRange.
double integral_identity_rhs(double a, double b);

}  // namespace cutloc::lambda
