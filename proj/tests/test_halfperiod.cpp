#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "cutloc/cutlocus.hpp"
#include "cutloc/errors.hpp"
#include "cutloc/geodesic.hpp"
#include "cutloc/halfperiod.hpp"
#include "cutloc/lambda_family.hpp"
#include "cutloc/quadrature.hpp"
#include "doctest.h"

using namespace cutloc;
using std::numbers::pi;

namespace {

const SurfaceModel& lambda_surface(double l) {
  static std::map<double, SurfaceModel> cache;
  auto it = cache.find(l);
  if (it == cache.end()) it = cache.emplace(l, build_surface(SurfaceDescriptor::lambda_family(l))).first;
  return it->second;
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

TEST_CASE("tanh-sinh on endpoint singularities") {
  auto r = quad::tanh_sinh([](double, double da, double) { return 1.0 / std::sqrt(da); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  // both ends singular, distances supplied by the rule
  r = quad::tanh_sinh([](double, double da, double db) { return 1.0 / std::sqrt(da * db); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(pi).epsilon(1e-13));
  r = quad::tanh_sinh([](double x, double, double) { return std::exp(x); }, -1.0, 2.0);
  CHECK(r.value == doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-14));
  // divergent: the levels never settle
  CHECK_THROWS_AS(quad::tanh_sinh([](double, double da, double) { return 1.0 / da; }, 0.0, 1.0), QuadratureStall);
}

TEST_CASE("phi against the closed form of the lambda family") {
  for (double l : {1.5, 2.0, 4.0, 5.0}) {
    const SurfaceModel& s = lambda_surface(l);
    const lambda::LambdaParams p(l);
    const double lo = 1.0 / std::sqrt(l) + 0.01, hi = 0.999;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double nu = lo + (hi - lo) * k / 49.0;
      worst = std::max(worst, std::abs(phi(s, nu) - lambda::phi_closed(p, nu)));
    }
    INFO("lambda=", l, " worst=", worst);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("reference values") {
  CHECK(std::abs(phi(lambda_surface(2), 0.8) - 6.357690640200014) <= 1e-10);
  CHECK(std::abs(ell(lambda_surface(2), 0.8) - 5.937052058618630) <= 1e-10);
  CHECK(std::abs(phi(lambda_surface(5), 0.9) - 1.8117329352423172) <= 1e-10);
  const double nu5 = lambda_surface(5).m(0.3).value;
  CHECK(std::abs(phi(lambda_surface(5), nu5) - 1.9268841840746595) <= 1e-10);
  CHECK(std::abs(ell(lambda_surface(5), nu5) - 1.9003799117953736) <= 1e-10);
  const double nut = tamura().m(0.5).value;
  CHECK(std::abs(phi(tamura(), nut) - 2.381468812533081) <= 1e-10);
  CHECK(std::abs(ell(tamura(), nut) - 2.362222139642565) <= 1e-10);
  CHECK(xi(lambda_surface(2), 0.8) == doctest::Approx(0.9729550745276567).epsilon(1e-13));
}

TEST_CASE("limits at both ends of the domain") {
  const SurfaceModel& l2 = lambda_surface(2);
  CHECK(std::abs(phi(l2, 1.0 - 1e-8) - pi) <= 1e-6);
  CHECK(std::abs(ell(l2, 1.0 - 1e-8) - pi) <= 1e-6);
  CHECK(phi_upper_limit(l2) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(ell_upper_limit(lambda_surface(5)) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(phi(l2, 1.0 / std::sqrt(2.0) + 1e-6) > 100.0);
  CHECK(std::abs(phi(tamura(), 1.0 - 1e-8) - phi_upper_limit(tamura())) <= 1e-4);
}

TEST_CASE("domain errors") {
  const SurfaceModel& l2 = lambda_surface(2);
  CHECK_THROWS_AS(phi(l2, 1.0), OutOfRange);
  CHECK_THROWS_AS(phi(l2, 1.0 - 1e-10), OutOfRange);
  CHECK_THROWS_AS(ell(l2, 1.0 / std::sqrt(2.0)), OutOfRange);
  CHECK_THROWS_AS(phi(two_plus_cos(), 1.0), OutOfRange);
  const SurfaceModel grows = build_surface(SurfaceDescriptor::custom("exp(t^2)"));
  CHECK(nu_domain(grows).empty());
  CHECK_THROWS_AS(phi(grows, 1.0), OutOfRange);
  CHECK(build_profile(grows).nu_grid.empty());
  CHECK_THROWS_AS(build_profile(l2, std::vector<double>{0.9, 0.8}), OutOfRange);
}

TEST_CASE("property: the Gauss-Kronrod route agrees") {
  std::mt19937_64 rng(3);
  for (const SurfaceModel* s : {&lambda_surface(2), &lambda_surface(5), &tamura(), &two_plus_cos()}) {
    const NuDomain d = nu_domain(*s);
    std::uniform_real_distribution<double> dist(d.lo + 0.01 * (d.hi - d.lo), d.hi - 0.01 * (d.hi - d.lo));
    for (int i = 0; i < 10; ++i) {
      const double nu = dist(rng);
      INFO(s->descriptor().tag(), " nu=", nu);
      CHECK(std::abs(phi(*s, nu) - phi_gauss_kronrod(*s, nu)) <= 1e-9);
      CHECK(std::abs(ell(*s, nu) - ell_gauss_kronrod(*s, nu)) <= 1e-9);
    }
  }
}

TEST_CASE("property: ell is at least phi times the smallest radius on the arc") {
  std::mt19937_64 rng(4);
  for (const SurfaceModel* s : {&lambda_surface(2), &tamura(), &two_plus_cos()}) {
    const NuDomain d = nu_domain(*s);
    std::uniform_real_distribution<double> dist(d.lo, d.hi);
    for (int i = 0; i < 20; ++i) {
      const double nu = dist(rng);
      // m ≥ ν on [−ξ, ξ]
      CHECK(ell(*s, nu) >= phi(*s, nu) * nu);
    }
  }
}

TEST_CASE("property: quadrature and geodesic shooting agree") {
  for (const SurfaceModel* s : {&lambda_surface(2), &tamura()}) {
    const NuDomain d = nu_domain(*s);
    const double lo = d.lo + 0.02 * (d.hi - d.lo), hi = d.hi - 0.02 * (d.hi - d.lo);
    for (int k = 0; k < 20; ++k) {
      const double nu = lo + (hi - lo) * k / 19.0;
      const EquatorReturn r = equator_return(*s, nu);
      INFO(s->descriptor().tag(), " nu=", nu);
      CHECK(std::abs(r.theta - phi(*s, nu)) <= 1e-6);
      CHECK(std::abs(r.length - ell(*s, nu)) <= 1e-6);
    }
  }
}

TEST_CASE("property: profiles are non-increasing on hypothesis-passing surfaces") {
  for (const SurfaceModel* s : {&lambda_surface(2), &lambda_surface(5), &tamura(), &two_plus_cos()}) {
    const HalfPeriodProfile p = build_profile(*s, 120);
    REQUIRE(p.nu_grid.size() == 120);
    for (std::size_t k = 1; k < p.nu_grid.size(); ++k) {
      const double slope = (p.phi_values[k] - p.phi_values[k - 1]) / (p.nu_grid[k] - p.nu_grid[k - 1]);
      CHECK(slope <= 1e-8);
      CHECK(p.phi_values[k] > 0.0);
      CHECK(std::isfinite(p.ell_values[k]));
      CHECK(s->m(p.xi_values[k]).value == doctest::Approx(p.nu_grid[k]).epsilon(1e-13));
    }
  }
}

TEST_CASE("t_pi") {
  const SurfaceModel& l5 = lambda_surface(5);
  CHECK(std::abs(t_pi(l5, build_profile(l5)) - std::asinh(std::sqrt(0.44))) <= 1e-9);
  CHECK(std::abs(t_pi(l5, build_profile(l5)) - 0.62244) <= 1e-4);
  CHECK(t_pi(lambda_surface(2), build_profile(lambda_surface(2))) == 0.0);
  CHECK(t_pi(lambda_surface(1.0001), build_profile(lambda_surface(1.0001))) == 0.0);
  // independent mpmath root of φ(m(t)) = π
  CHECK(std::abs(t_pi(tamura(), build_profile(tamura())) - 0.976348490856051) <= 1e-9);
  CHECK(std::abs(t_pi(two_plus_cos(), build_profile(two_plus_cos())) - 2.506449261810918) <= 1e-9);

  const SurfaceModel grows = build_surface(SurfaceDescriptor::custom("exp(t^2)"));
  CHECK_THROWS_AS(t_pi(grows, build_profile(grows)), HypothesesNotVerified);
  // a coarse grid only changes the bracket, not the root
  CHECK(std::abs(t_pi(l5, build_profile(l5, 3)) - std::asinh(std::sqrt(0.44))) <= 1e-9);
}
