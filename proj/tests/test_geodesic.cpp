#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "cutloc/errors.hpp"
#include "cutloc/geodesic.hpp"
#include "doctest.h"

using namespace cutloc;
using std::numbers::pi;

namespace {

double phi_lambda(double lambda, double nu) {
  return pi * (-std::sqrt(lambda - 1) + lambda * nu / std::sqrt(lambda * nu * nu - 1));
}

const SurfaceModel& lambda2() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::lambda_family(2.0));
  return s;
}
const SurfaceModel& lambda5() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::lambda_family(5.0));
  return s;
}
const SurfaceModel& tamura() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::tamura());
  return s;
}
const SurfaceModel& two_plus_cos() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::custom("2+cos(t)"));
  return s;
}

}  // namespace

TEST_CASE("meridians and the equator") {
  const GeodesicTrace meridian = shoot(lambda2(), {0.3, 1.25}, 0.0, 10.0);
  CHECK(meridian.nu == 0.0);
  for (const TraceSample& p : meridian.samples) CHECK(p.theta == 1.25);
  CHECK(meridian.samples.back().t == doctest::Approx(10.3).epsilon(1e-12));
  CHECK_FALSE(tangency_check(meridian));

  const GeodesicTrace equator = shoot(lambda2(), {0.0, 0.0}, pi / 2, 20.0);
  CHECK(equator.nu == doctest::Approx(1.0).epsilon(1e-15));
  for (const TraceSample& p : equator.samples) CHECK(std::abs(p.t) <= 1e-12);
  CHECK(equator.samples.back().theta == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(equator.events.empty());
}

TEST_CASE("Clairaut constant from the direction angle") {
  CHECK(clairaut_constant(lambda2(), 0.0, std::asin(0.8)) == doctest::Approx(0.8).epsilon(1e-15));
  const double m = lambda5().m(0.3).value;
  CHECK(clairaut_constant(lambda5(), -0.3, pi / 2) == doctest::Approx(m).epsilon(1e-15));
  CHECK(clairaut_constant(lambda5(), -0.3, -pi / 2) == doctest::Approx(-m).epsilon(1e-15));
}

TEST_CASE("equator return matches the closed-form half period") {
  const double expected = phi_lambda(2.0, 0.8);  // 6.3576906...
  const GeodesicTrace trace = shoot(lambda2(), {0.0, 0.0}, std::asin(0.8), 15.0);
  const TraceEvent* crossing = nullptr;
  for (const TraceEvent& e : trace.events)
    if (e.kind == EventKind::EquatorCrossing && crossing == nullptr) crossing = &e;
  REQUIRE(crossing != nullptr);
  CHECK(std::abs(crossing->point.theta - expected) <= 1e-6);

  CHECK(std::abs(equator_return_angle(lambda2(), 0.8) - expected) <= 1e-6);
  const double nu5 = lambda5().m(0.3).value;
  CHECK(std::abs(equator_return_angle(lambda5(), nu5) - 1.9268841840746595) <= 1e-5);
  CHECK_THROWS_AS(equator_return_angle(tamura(), 0.0), NoReturn);
  CHECK_THROWS_AS(equator_return_angle(lambda2(), 1.0 / std::sqrt(2.0) - 1e-3), NoReturn);
  CHECK_THROWS_AS(equator_return_angle(lambda2(), 1.0), OutOfRange);
}

TEST_CASE("turning points sit where m equals the Clairaut constant") {
  const GeodesicTrace trace = shoot(lambda2(), {0.0, 0.0}, std::asin(0.8), 15.0);
  CHECK(tangency_check(trace));
  const double xi = std::asinh(std::sqrt((1 - 0.64) / (2 * 0.64 - 1)));
  for (const TraceEvent& e : trace.events)
    if (e.kind == EventKind::TurningPoint) CHECK(std::abs(std::abs(e.point.t) - xi) <= 1e-8);

  CHECK_FALSE(tangency_check(shoot(lambda2(), {0.0, 0.0}, 0.0, 10.0)));
  CHECK_FALSE(tangency_check(shoot(lambda2(), {-0.5, 0.0}, 0.0, 10.0)));
}

TEST_CASE("conjugate points along the equator and meridians") {
  const GeodesicTrace eq2 = shoot(lambda2(), {0.0, 0.0}, pi / 2, 10.0);
  const auto z2 = first_conjugate(lambda2(), eq2);
  REQUIRE(z2.has_value());
  CHECK(std::abs(*z2 - pi) <= 1e-6);

  const GeodesicTrace eqt = shoot(tamura(), {0.0, 0.0}, pi / 2, 10.0);
  const auto zt = first_conjugate(tamura(), eqt);
  REQUIRE(zt.has_value());
  CHECK(std::abs(*zt - pi / std::sqrt(2.0)) <= 1e-6);

  const GeodesicTrace meridian = shoot(lambda2(), {0.0, 0.0}, 0.0, 50.0);
  CHECK_FALSE(first_conjugate(lambda2(), meridian).has_value());
  // G = 2 − 4t² reaches −2498 at the ends; y itself would grow like e^{t²}
  CHECK_FALSE(first_conjugate(tamura(), shoot(tamura(), {-25.0, 0.0}, 0.0, 50.0)).has_value());
  // past t ≈ 26.6 m is subnormal
  CHECK_THROWS_AS(first_conjugate(tamura(), shoot(tamura(), {0.0, 0.0}, 0.0, 50.0)), EvaluationDomainError);

  // short trace ends before the conjugate point
  CHECK_FALSE(first_conjugate(lambda2(), shoot(lambda2(), {0.0, 0.0}, pi / 2, 3.0)).has_value());
}

TEST_CASE("property: unit speed and Clairaut constant are conserved") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tdist(-1.5, 1.5), adist(-pi, pi);
  for (const SurfaceModel* s : {&lambda2(), &tamura()}) {
    double worst_speed = 0.0, worst_clairaut = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GeodesicTrace trace = shoot(*s, {tdist(rng), 0.0}, adist(rng), 50.0);
      const ConservationError err = conservation_error(*s, trace);
      worst_speed = std::max(worst_speed, err.speed);
      worst_clairaut = std::max(worst_clairaut, err.clairaut);
      for (std::size_t k = 1; k < trace.samples.size(); ++k)
        REQUIRE(trace.samples[k].s > trace.samples[k - 1].s);
    }
    INFO(s->descriptor().tag(), " speed ", worst_speed, " clairaut ", worst_clairaut);
    CHECK(worst_speed <= 1e-9);
    CHECK(worst_clairaut <= 1e-9);
  }
}

TEST_CASE("property: reflection in t mirrors geodesics") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> tdist(-1.0, 1.0), adist(-pi, pi);
  for (int i = 0; i < 10; ++i) {
    const double t = tdist(rng), a = adist(rng);
    const double mirrored = a >= 0 ? pi - a : -pi - a;
    const GeodesicTrace up = shoot(lambda5(), {t, 0.4}, a, 20.0);
    const GeodesicTrace down = shoot(lambda5(), {-t, 0.4}, mirrored, 20.0);
    // step sequences may differ, so compare at matching arc lengths only
    const TraceSample& u = up.samples.back();
    const TraceSample& d = down.samples.back();
    CHECK(std::abs(u.t + d.t) <= 1e-8);
    CHECK(std::abs(u.theta - d.theta) <= 1e-8);
    CHECK(std::abs(u.vt + d.vt) <= 1e-8);
    REQUIRE(up.events.size() == down.events.size());
    for (std::size_t k = 0; k < up.events.size(); ++k) {
      CHECK(up.events[k].kind == down.events[k].kind);
      CHECK(std::abs(up.events[k].s - down.events[k].s) <= 1e-8);
      CHECK(std::abs(up.events[k].point.t + down.events[k].point.t) <= 1e-8);
      CHECK(std::abs(up.events[k].point.theta - down.events[k].point.theta) <= 1e-8);
    }
  }
}

TEST_CASE("no tangency below m(t0) on a surface with finite t0") {
  const SurfaceModel& s = two_plus_cos();
  REQUIRE(s.t0_finite());
  const double m0 = s.m_at_0();
  for (double nu : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    for (double sign : {1.0, -1.0}) {
      const double angle = sign > 0 ? std::asin(nu / m0) : pi - std::asin(nu / m0);
      const GeodesicTrace trace = shoot(s, {0.0, 0.0}, angle, 50.0);
      INFO("nu=", nu);
      CHECK_FALSE(tangency_check(trace));
      int crossings = 0;
      for (const TraceEvent& e : trace.events) crossings += e.kind == EventKind::EquatorCrossing;
      CHECK(crossings == 0);
    }
  }
}

TEST_CASE("the parallel at t0 is a geodesic") {
  // G = -1 on this parallel, so rounding in m'(t0) ~ 1e-16 grows like
  // cosh(s); two full turns keep the expected drift near 1e-11.
  const SurfaceModel& s = two_plus_cos();
  const double two_turns = 4 * pi * s.m(s.t0()).value;
  for (double sign : {1.0, -1.0}) {
    const GeodesicTrace trace = shoot(s, {sign * s.t0(), 0.0}, pi / 2, two_turns);
    double drift = 0.0;
    for (const TraceSample& p : trace.samples) drift = std::max(drift, std::abs(p.t - sign * s.t0()));
    CHECK(drift <= 1e-8);
  }
}

TEST_CASE("invalid shots") {
  CHECK_THROWS_AS(shoot(lambda2(), {0.0, 0.0}, 0.0, 0.0), OutOfRange);
  CHECK_THROWS_AS(shoot(lambda2(), {0.0, 0.0}, 4.0, 1.0), OutOfRange);
  Tolerances impossible;
  impossible.atol = 1e-30;
  impossible.rtol = 1e-30;
  CHECK_THROWS_AS(shoot(lambda2(), {0.0, 0.0}, 0.5, 1.0, impossible), StepFailure);
}
