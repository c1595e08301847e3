#pragma once

#include <optional>
#include <vector>

#include "cutloc/surface.hpp"

namespace cutloc {

/// Tighter than this (both atol and rtol) the local error estimate is
/// dominated by rounding, so the integrator refuses with StepFailure.
inline constexpr double kTightestTolerance = 1e-14;

/// Step control for the embedded Runge–Kutta integrator.
struct Tolerances {
  double atol = 1e-12;
  double rtol = 1e-12;
  double max_step = 0.25;
  /// Width of the arc-length bracket at which event refinement stops.
  double event_tol = 1e-12;
  long max_steps = 5'000'000;
};

struct TraceSample {
  double s = 0.0;
  double t = 0.0;
  double theta = 0.0;
  double vt = 0.0;
  double vtheta = 0.0;
};

enum class EventKind { TurningPoint, EquatorCrossing };

struct TraceEvent {
  EventKind kind = EventKind::TurningPoint;
  double s = 0.0;
  SurfacePoint point;
};

/// Unit-speed geodesic on the universal cover, sampled at every accepted step.
struct GeodesicTrace {
  double nu = 0.0;
  SurfacePoint start;
  double direction_angle = 0.0;
  std::vector<TraceSample> samples;
  std::vector<TraceEvent> events;

  double length() const { return samples.empty() ? 0.0 : samples.back().s; }
};

/// Clairaut constant of the geodesic leaving a point at height t with the
/// given angle from ∂/∂t.
double clairaut_constant(const SurfaceModel& s, double t, double direction_angle);

/// Integrates the geodesic through `start` leaving at `direction_angle`
/// (measured from ∂/∂t toward ∂/∂θ) for the given arc length.
/// Throws StepFailure, EvaluationDomainError, OutOfRange.
GeodesicTrace shoot(const SurfaceModel& s, SurfacePoint start, double direction_angle, double length,
                    const Tolerances& tol = {});

struct EquatorReturn {
  double theta = 0.0;
  double length = 0.0;
};

/// First return to t=0 of the geodesic leaving (0,0) upward with Clairaut
/// constant ν. Throws NoReturn when ν <= m(t₀) or no return occurs within
/// `max_length`, OutOfRange when ν >= m(0).
EquatorReturn equator_return(const SurfaceModel& s, double nu, const Tolerances& tol = {},
                             double max_length = 1000.0);

inline double equator_return_angle(const SurfaceModel& s, double nu, const Tolerances& tol = {}) {
  return equator_return(s, nu, tol).theta;
}

/// Arc length of the first zero of the Jacobi field y'' + G y = 0,
/// y(0)=0, y'(0)=1 along the traced geodesic, if one lies within the trace.
/// Tracked through its Prüfer angle, so fast growth cannot overflow.
/// Throws EvaluationDomainError where m underflows and G = -m''/m is lost.
std::optional<double> first_conjugate(const SurfaceModel& s, const GeodesicTrace& trace,
                                      const Tolerances& tol = {});

/// True iff the trace has an interior turning point (tangency to a parallel).
bool tangency_check(const GeodesicTrace& trace);

/// Largest violations of unit speed and of the Clairaut relation over the samples.
struct ConservationError {
  double speed = 0.0;
  double clairaut = 0.0;
};
ConservationError conservation_error(const SurfaceModel& s, const GeodesicTrace& trace);

}  // namespace cutloc
