#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "cutloc/errors.hpp"

namespace cutloc::quad {

struct TanhSinhOptions {
  /// Stop once two successive levels agree to abs_tol + rel_tol·|I|.
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int min_level = 4;
  int max_level = 14;
  /// Half-width of the truncated u-range; nodes past it are below double resolution.
  double u_max = 6.5;
  /// When the integrand carries rounding noise the level differences stop
  /// shrinking. Such a plateau is accepted if it sits below plateau_rel·|I|.
  double plateau_rel = 1e-9;
};

struct TanhSinhResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
  long evaluations = 0;
};

/// Double-exponential quadrature of f over [a, b]. The integrand is called as
/// f(x, x − a, b − x) with both endpoint distances computed without
/// cancellation, so integrable endpoint singularities can be resolved down to
/// distances far below ulp(x). Non-finite samples are dropped: they only
/// occur where the node weight has already underflowed. Throws
/// QuadratureStall when successive halvings of the step neither agree nor
/// settle on a plateau, or up front when both tolerances are below the
/// double epsilon.
template <class F>
TanhSinhResult tanh_sinh(F&& f, double a, double b, const TanhSinhOptions& opt = {}) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (opt.abs_tol < kEps && opt.rel_tol < kEps) throw QuadratureStall("tolerance unreachable: below double epsilon");
  const double half = 0.5 * (b - a);
  constexpr double half_pi = 1.5707963267948966;
  TanhSinhResult r;

  auto term = [&](double u) {
    const double v = half_pi * std::sinh(u);
    const double ch = std::cosh(v);
    const double w = half * half_pi * std::cosh(u) / (ch * ch);
    if (w == 0.0) return 0.0;
    // distance to the nearer endpoint: 2·half / (1 + e^{2|v|})
    const double near = 2.0 * half / (1.0 + std::exp(2.0 * std::abs(v)));
    const double far = 2.0 * half - near;
    const double x = v < 0.0 ? a + near : b - near;
    const double fx = v < 0.0 ? f(x, near, far) : f(x, far, near);
    ++r.evaluations;
    if (!std::isfinite(fx)) return 0.0;
    return w * fx;
  };

  double h = 1.0;
  double sum = term(0.0);
  for (int k = 1; k * h <= opt.u_max; ++k) sum += term(k * h) + term(-k * h);
  double estimate = h * sum;

  double previous_diff = kInf;
  int stagnant = 0;
  for (int level = 1; level <= opt.max_level; ++level) {
    h *= 0.5;
    for (long k = 1; k * h <= opt.u_max; k += 2) sum += term(k * h) + term(-k * h);
    const double next = h * sum;
    const double diff = std::abs(next - estimate);
    estimate = next;
    r.levels = level;
    r.error_estimate = diff;
    if (level >= opt.min_level && diff <= opt.abs_tol + opt.rel_tol * std::abs(next)) {
      r.value = next;
      return r;
    }
    stagnant = diff > 0.25 * previous_diff ? stagnant + 1 : 0;
    previous_diff = diff;
    if (level >= opt.min_level && stagnant >= 2 && diff <= opt.plateau_rel * std::abs(next)) {
      r.value = next;
      return r;
    }
  }
  throw QuadratureStall("tanh-sinh did not settle after " + std::to_string(opt.max_level) +
                        " levels (last relative change " +
                        std::to_string(r.error_estimate / std::abs(estimate)) + ")");
}

}  // namespace cutloc::quad
