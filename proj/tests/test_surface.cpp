#include <cmath>
#include <numbers>

#include "cutloc/errors.hpp"
#include "cutloc/surface.hpp"
#include "doctest.h"

using namespace cutloc;
using std::numbers::pi;

TEST_CASE("builtin surfaces carry the expected constants") {
  const SurfaceModel tamura = build_surface(SurfaceDescriptor::tamura());
  CHECK_FALSE(tamura.t0_finite());
  CHECK(tamura.horizon_limited());
  CHECK(tamura.m_at_0() == 1.0);
  CHECK(tamura.inf_m() < 1e-200);
  CHECK(tamura.evenness_certified());

  const SurfaceModel lam2 = build_surface(SurfaceDescriptor::lambda_family(2.0));
  CHECK_FALSE(lam2.t0_finite());
  CHECK(lam2.horizon_limited());
  CHECK(lam2.m_at_0() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lam2.inf_m() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("t0 of 2+cos(t) is pi") {
  const SurfaceModel s = build_surface(SurfaceDescriptor::custom("2+cos(t)"));
  REQUIRE(s.t0_finite());
  CHECK_FALSE(s.horizon_limited());
  CHECK(std::abs(s.t0() - pi) <= 1e-10);
  CHECK(s.inf_m() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(find_t0(s).value - pi) <= 1e-10);
}

TEST_CASE("increasing and degenerate warping functions") {
  const SurfaceModel up = build_surface(SurfaceDescriptor::custom("exp(t^2)", 5.0));
  CHECK(up.t0() == 0.0);
  CHECK_FALSE(up.horizon_truncated());
  CHECK(up.inf_m() == up.m_at_0());
  // e^{t²} overflows near t = 26.6: the scan stops short of the requested horizon
  const SurfaceModel huge = build_surface(SurfaceDescriptor::custom("exp(t^2)"));
  CHECK(huge.horizon_truncated());
  CHECK(huge.t_max_scan() > 26.0);
  CHECK(huge.t_max_scan() < 26.7);
  CHECK(huge.descriptor().t_max_scan == 50.0);
  CHECK_THROWS_AS(build_surface(SurfaceDescriptor::custom("1")), DegenerateAtZero);
}

TEST_CASE("validation failures") {
  CHECK_THROWS_AS(build_surface(SurfaceDescriptor::custom("2+sin(t)")), NotEven);
  CHECK_THROWS_AS(build_surface(SurfaceDescriptor::custom("cos(t)")), NotPositive);
  CHECK_THROWS_AS(build_surface(SurfaceDescriptor::custom("sqrt(1-t^2)")), EvaluationDomainError);
  // e^{-t²} underflows to zero well inside the default horizon of 50
  CHECK_THROWS_AS(build_surface(SurfaceDescriptor::custom("exp(-t^2)")), NotPositive);
  CHECK_THROWS_AS(SurfaceDescriptor::lambda_family(1.0), OutOfRange);
}

TEST_CASE("gaussian curvature") {
  const SurfaceModel tamura = build_surface(SurfaceDescriptor::tamura());
  CHECK(gaussian_curvature(tamura, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gaussian_curvature(tamura, 1.0) == doctest::Approx(-2.0).epsilon(1e-14));
  const SurfaceModel lam4 = build_surface(SurfaceDescriptor::lambda_family(4.0));
  CHECK(gaussian_curvature(lam4, 0.0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("lambda-family curvature follows the h-formula and is not monotone") {
  for (double lambda : {1.5, 2.0, 4.0}) {
    const SurfaceModel s = build_surface(SurfaceDescriptor::lambda_family(lambda));
    for (int i = 0; i <= 300; ++i) {
      const double t = 0.01 * i;
      const double h = 1 + lambda * std::sinh(t) * std::sinh(t);
      const double expected = (lambda - 1) * (3 / (h * h) - 2 / h);
      const double got = gaussian_curvature(s, t);
      CHECK(std::abs(got - expected) <= 1e-9 * std::max(std::abs(expected), 1e-3));
    }
    CHECK(gaussian_curvature(s, 0.0) > 0.0);
    // minimum at h = 3, i.e. sinh²t = 2/λ
    const double t_min = std::asinh(std::sqrt(2.0 / lambda));
    CHECK(gaussian_curvature(s, t_min) == doctest::Approx(-(lambda - 1) / 3).epsilon(1e-10));
    CHECK(gaussian_curvature(s, t_min - 0.05) > gaussian_curvature(s, t_min));
    CHECK(gaussian_curvature(s, t_min + 0.05) > gaussian_curvature(s, t_min));
    const double far = gaussian_curvature(s, 8.0);
    CHECK(far < 0.0);
    CHECK(far > -1e-5);
  }
}

TEST_CASE("xi inverts the warping function") {
  const SurfaceModel tamura = build_surface(SurfaceDescriptor::tamura());
  CHECK(xi(tamura, 0.5) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-12));
  const SurfaceModel lam2 = build_surface(SurfaceDescriptor::lambda_family(2.0));
  const double nu = 0.8;
  CHECK(xi(lam2, nu) == doctest::Approx(std::asinh(std::sqrt((1 - nu * nu) / (2 * nu * nu - 1)))).epsilon(1e-12));
  CHECK(xi(lam2, 0.9729550745276566) >= 0.0);
  CHECK(xi(lam2, 1.0 - 1e-12) < 2e-6);

  for (const SurfaceModel* s : {&tamura, &lam2}) {
    for (int i = 1; i < 40; ++i) {
      const double v = s->inf_m() + (s->m_at_0() - s->inf_m()) * i / 40.0;
      CHECK(std::abs(s->m(xi(*s, v)).value - v) <= 1e-10);
    }
    CHECK_THROWS_AS(xi(*s, s->m_at_0()), OutOfRange);
    CHECK_THROWS_AS(xi(*s, 0.5 * s->inf_m()), OutOfRange);
  }
}

TEST_CASE("surface tags and descriptors") {
  CHECK(parse_surface_tag("tamura").kind == SurfaceKind::Tamura);
  const SurfaceDescriptor l = parse_surface_tag("lambda:2.5");
  CHECK(l.kind == SurfaceKind::Lambda);
  CHECK(l.lambda == 2.5);
  const SurfaceDescriptor c = parse_surface_tag("custom:2+cos(t)");
  CHECK(c.kind == SurfaceKind::Custom);
  CHECK(c.source == "2+cos(t)");
  CHECK_THROWS_AS(parse_surface_tag("lambda:x"), OutOfRange);
  CHECK_THROWS_AS(parse_surface_tag("lambda:0.5"), OutOfRange);

  const nlohmann::json j = l;
  CHECK(j.at("kind") == "lambda");
  CHECK(j.at("params").at("lambda") == 2.5);
  const SurfaceDescriptor back = j.get<SurfaceDescriptor>();
  CHECK(back.lambda == 2.5);
  CHECK(back.t_max_scan == l.t_max_scan);
}
