#include "cutloc/geodesic.hpp"

#include <cmath>
#include <numbers>

#include "geodesic_engine.hpp"

namespace cutloc {

using detail::EventFn;
using detail::Flow;

namespace {

void check_shot(double direction_angle, double length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw OutOfRange("geodesic length must be positive");
  if (!(std::abs(direction_angle) <= std::numbers::pi))
    throw OutOfRange("direction angle must lie in [-pi, pi]");
}

}  // namespace

double clairaut_constant(const SurfaceModel& s, double t, double direction_angle) {
  const auto y = detail::initial_state<4>(s, {t, 0.0}, direction_angle);
  const double m = s.m(t).value;
  return m * m * y[3];
}

GeodesicTrace shoot(const SurfaceModel& s, SurfacePoint start, double direction_angle, double length,
                    const Tolerances& tol) {
  check_shot(direction_angle, length);
  GeodesicTrace trace;
  trace.start = start;
  trace.direction_angle = direction_angle;
  trace.nu = clairaut_constant(s, start.t, direction_angle);

  const std::vector<EventFn<4>> events{{0, 0.0}, {2, 0.0}};
  detail::integrate<4>(
      s, detail::initial_state<4>(s, start, direction_angle), length, tol, events,
      [&](double arc, const detail::State<4>& y) {
        trace.samples.push_back({arc, y[0], y[1], y[2], y[3]});
      },
      [&](std::size_t index, double arc, const detail::State<4>& y) {
        const EventKind kind = index == 0 ? EventKind::EquatorCrossing : EventKind::TurningPoint;
        trace.events.push_back({kind, arc, {y[0], y[1]}});
        return Flow::Continue;
      });
  return trace;
}

EquatorReturn equator_return(const SurfaceModel& s, double nu, const Tolerances& tol, double max_length) {
  if (!(nu < s.m_at_0())) throw OutOfRange("Clairaut constant must be below m(0)");
  if (!(nu > s.inf_m()))
    throw NoReturn("geodesics with Clairaut constant <= m(t0) do not meet the equator again");
  const double angle = std::asin(nu / s.m_at_0());
  EquatorReturn result;
  bool found = false;
  const std::vector<EventFn<4>> events{{0, 0.0}};
  detail::integrate<4>(
      s, detail::initial_state<4>(s, {0.0, 0.0}, angle), max_length, tol, events,
      [](double, const detail::State<4>&) {},
      [&](std::size_t, double arc, const detail::State<4>& y) {
        result = {y[1], arc};
        found = true;
        return Flow::Stop;
      });
  if (!found) throw NoReturn("no return to the equator within arc length " + std::to_string(max_length));
  return result;
}

std::optional<double> first_conjugate(const SurfaceModel& s, const GeodesicTrace& trace, const Tolerances& tol) {
  const double length = trace.length();
  if (!(length > 0.0)) return std::nullopt;
  std::optional<double> zero;
  const std::vector<EventFn<5>> events{{4, std::numbers::pi}};
  detail::integrate<5>(
      s, detail::initial_state<5>(s, trace.start, trace.direction_angle), length, tol, events,
      [](double, const detail::State<5>&) {},
      [&](std::size_t, double arc, const detail::State<5>&) {
        zero = arc;
        return Flow::Stop;
      });
  return zero;
}

bool tangency_check(const GeodesicTrace& trace) {
  for (const TraceEvent& e : trace.events)
    if (e.kind == EventKind::TurningPoint) return true;
  return false;
}

ConservationError conservation_error(const SurfaceModel& s, const GeodesicTrace& trace) {
  ConservationError worst;
  for (const TraceSample& p : trace.samples) {
    const double m = s.m(p.t).value;
    const double speed = p.vt * p.vt + m * m * p.vtheta * p.vtheta;
    worst.speed = std::max(worst.speed, std::abs(speed - 1.0));
    worst.clairaut = std::max(worst.clairaut, std::abs(m * m * p.vtheta - trace.nu));
  }
  return worst;
}

}  // namespace cutloc
