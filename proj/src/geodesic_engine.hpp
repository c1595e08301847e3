#pragma once

// Adaptive geodesic integration with event detection, shared by the
// geodesic and oracle modules.
//
// State layout: [t, theta, vt, vtheta] optionally followed by the Prüfer
// angle psi of the Jacobi field y'' = -G y, G = -m''/m: with
// y = r sin(psi), y' = r cos(psi) the field vanishes where psi crosses a
// multiple of π, and psi' = cos² + G sin² stays bounded where y would
// overflow (G very negative far out on a meridian).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cutloc/errors.hpp"
#include "cutloc/geodesic.hpp"
#include "cutloc/ode.hpp"
#include "cutloc/surface.hpp"

namespace cutloc::detail {

template <std::size_t N>
using State = ode::State<N>;

enum class Flow { Continue, Stop };

template <std::size_t N>
struct GeodesicRhs {
  const SurfaceModel* surface;

  void operator()(double, const State<N>& y, State<N>& dy) const {
    const Jet2 m = surface->m(y[0]);
    const double vt = y[2], vth = y[3];
    dy[0] = vt;
    dy[1] = vth;
    if (vth == 0.0) {
      // meridian: avoids 0/0 once m underflows
      dy[2] = 0.0;
      dy[3] = 0.0;
    } else {
      dy[2] = m.value * m.d1 * vth * vth;
      dy[3] = -2.0 * (m.d1 / m.value) * vt * vth;
    }
    if constexpr (N == 5) {
      // a subnormal m leaves m''/m with no correct digits
      if (!(m.value >= std::numeric_limits<double>::min()))
        throw EvaluationDomainError(y[0], "m underflows; the Jacobi coefficient is lost");
      const double c = std::cos(y[4]), sn = std::sin(y[4]);
      dy[4] = c * c - (m.d2 / m.value) * sn * sn;
    }
  }
};

inline double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Unit-speed initial state. Exact axis directions are special-cased so that
/// cos(π/2) rounding does not tilt a parallel or a meridian.
template <std::size_t N>
State<N> initial_state(const SurfaceModel& s, SurfacePoint start, double angle) {
  double c = std::cos(angle), sn = std::sin(angle);
  const double half_pi = 1.5707963267948966;
  if (std::abs(angle) == half_pi) c = 0.0;
  if (angle == 0.0 || std::abs(angle) == 2.0 * half_pi) sn = 0.0;
  State<N> y{};
  y[0] = start.t;
  y[1] = start.theta;
  y[2] = c;
  y[3] = sn / s.m(start.t).value;
  if constexpr (N == 5) y[4] = 0.0;  // y = 0, y' = 1
  return y;
}

/// Scalar event function of the state; an event fires where it changes sign.
template <std::size_t N>
struct EventFn {
  std::size_t component;
  double offset;
  double operator()(const State<N>& y) const { return y[component] - offset; }
};

/// Integrates from arc length 0 up to `length`. `on_step(s, y)` sees the
/// initial state and every accepted step; `on_event(index, s, y)` sees each
/// located sign change in arc-length order and may stop the integration.
/// Returns the arc length reached.
template <std::size_t N, class OnStep, class OnEvent>
double integrate(const SurfaceModel& surface, State<N> y, double length, const Tolerances& tol,
                 const std::vector<EventFn<N>>& events, OnStep&& on_step, OnEvent&& on_event) {
  if (tol.atol < kTightestTolerance && tol.rtol < kTightestTolerance)
    throw StepFailure("tolerance unreachable: atol and rtol below 1e-14");
  GeodesicRhs<N> f{&surface};
  double s = 0.0;
  State<N> k1;
  f(s, y, k1);
  on_step(s, y);

  std::vector<double> last_sign(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) last_sign[i] = sign_of(events[i](y));

  double h = std::min({0.01, tol.max_step, length});
  long steps = 0;
  struct Hit {
    double delta;
    std::size_t index;
    State<N> y;
  };
  std::vector<Hit> hits;

  while (s < length) {
    if (++steps > tol.max_steps) throw StepFailure("step budget exhausted at s=" + std::to_string(s));
    h = std::min({h, tol.max_step, length - s});
    const auto out = ode::dopri_step<N>(f, s, y, k1, h);
    double err = ode::error_norm<N>(y, out, tol.atol, tol.rtol);
    if (!std::isfinite(err)) err = 1e10;
    if (err > 1.0) {
      h = ode::next_step(h, err);
      if (h < 1e-14 * std::max(1.0, s))
        throw StepFailure("tolerance unreachable at s=" + std::to_string(s));
      continue;
    }

    hits.clear();
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double g_new = events[i](out.y);
      const double sg = sign_of(g_new);
      if (last_sign[i] == 0.0) {
        last_sign[i] = sg;
        continue;
      }
      if (sg == last_sign[i]) continue;
      if (sg == 0.0) {
        hits.push_back({h, i, out.y});
        last_sign[i] = 0.0;
        continue;
      }
      // bracketed refinement (Illinois) over sub-steps taken from (s, y)
      const EventFn<N>& g = events[i];
      double a = 0.0, fa = g(y), b = h, fb = g_new;
      State<N> best = out.y;
      double best_delta = h;
      int side = 0;
      for (int iter = 0; iter < 100 && b - a > tol.event_tol; ++iter) {
        double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const State<N> yc = ode::dopri_step<N>(f, s, y, k1, c).y;
        const double fc = g(yc);
        best = yc;
        best_delta = c;
        if (fc == 0.0) break;
        if (sign_of(fc) == sign_of(fb)) {
          b = c;
          fb = fc;
          if (side == -1) fa *= 0.5;
          side = -1;
        } else {
          a = c;
          fa = fc;
          if (side == 1) fb *= 0.5;
          side = 1;
        }
      }
      hits.push_back({best_delta, i, best});
      last_sign[i] = sg;
    }

    if (!hits.empty()) {
      std::sort(hits.begin(), hits.end(), [](const Hit& l, const Hit& r) { return l.delta < r.delta; });
      for (const Hit& hit : hits) {
        if (on_event(hit.index, s + hit.delta, hit.y) == Flow::Stop) {
          on_step(s + hit.delta, hit.y);
          return s + hit.delta;
        }
      }
    }

    s = (h == length - s) ? length : s + h;
    y = out.y;
    k1 = out.dydx;
    on_step(s, y);
    h = ode::next_step(h, err);
  }
  return s;
}

}  // namespace cutloc::detail
