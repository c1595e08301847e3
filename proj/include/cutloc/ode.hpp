#pragma once

// Dormand–Prince 5(4) embedded Runge–Kutta step with local extrapolation.
// The stepper is stateless; step control lives with the caller.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace cutloc::ode {

template <std::size_t N>
using State = std::array<double, N>;

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// b - b* (difference between the 5th- and 4th-order weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

template <std::size_t N>
struct StepOutcome {
  State<N> y;      // 5th-order solution
  State<N> dydx;   // derivative at the new point (FSAL)
  State<N> error;  // embedded error estimate
};

/// One step of size h from (x, y) with derivative k1 = f(x, y).
/// `f` is callable as f(x, const State&, State&).
template <std::size_t N, class Rhs>
StepOutcome<N> dopri_step(Rhs& f, double x, const State<N>& y, const State<N>& k1, double h) {
  using namespace dp;
  State<N> k2, k3, k4, k5, k6, tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  f(x + c2 * h, tmp, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(x + c3 * h, tmp, k3);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(x + c4 * h, tmp, k4);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  f(x + c5 * h, tmp, k5);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  f(x + h, tmp, k6);

  StepOutcome<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out.y[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  f(x + h, out.y, out.dydx);
  for (std::size_t i = 0; i < N; ++i)
    out.error[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                        e7 * out.dydx[i]);
  return out;
}

/// Scaled max-norm of the error estimate; <= 1 means the step is acceptable.
template <std::size_t N>
double error_norm(const State<N>& y0, const StepOutcome<N>& s, double atol, double rtol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(s.y[i]));
    worst = std::max(worst, std::abs(s.error[i]) / scale);
  }
  return worst;
}

/// Standard step-size update for a 5th-order pair.
inline double next_step(double h, double err) {
  constexpr double safety = 0.9, min_factor = 0.2, max_factor = 5.0;
  if (err == 0.0) return h * max_factor;
  const double factor = safety * std::pow(err, -0.2);
  return h * std::clamp(factor, min_factor, max_factor);
}

}  // namespace cutloc::ode
