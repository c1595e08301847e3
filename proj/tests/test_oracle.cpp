#include <cmath>
#include <numbers>
#include <random>

#include "cutloc/cutlocus.hpp"
#include "cutloc/errors.hpp"
#include "cutloc/halfperiod.hpp"
#include "cutloc/oracle.hpp"
#include "doctest.h"

using namespace cutloc;
using namespace cutloc::oracle;
using std::numbers::pi;

namespace {

const SurfaceModel& l2() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::lambda_family(2));
  return s;
}
const SurfaceModel& l5() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::lambda_family(5));
  return s;
}
const SurfaceModel& tamura() {
  static const SurfaceModel s = build_surface(SurfaceDescriptor::tamura());
  return s;
}

constexpr double kPhiL5 = 1.9268841840746595;  // φ(m(0.3)) at λ=5
constexpr double kEllL5 = 1.9003799117953736;  // ℓ(m(0.3)) at λ=5

OracleOptions light() {
  OracleOptions o;
  o.fan_size = 256;
  o.max_winding = 1;
  return o;
}

}  // namespace

TEST_CASE("short meridian and short parallel") {
  const FanSearchResult r = distance(l2(), {0, 0}, {0.1, 0});
  CHECK(std::abs(r.best_length - 0.1) <= 1e-10);
  CHECK(r.minimizers() == 1);
  CHECK(std::abs(r.best_angles.front()) <= 1e-9);

  // the short way round is the lift k = −1
  const FanSearchResult p = distance(l2(), {0, 0}, {0, 2 * pi - 0.1});
  CHECK(std::abs(p.best_length - 0.1) <= 1e-10);
  CHECK(std::abs(p.per_lift.at(-1) - 0.1) <= 1e-10);
}

TEST_CASE("the alpha/beta pair at the first cut point") {
  const ParallelFan fan(l5(), {-0.3, 0}, 0.3, length_budget(l5(), {-0.3, 0}, {0.3, 2 * pi}, 2));
  // at the end of the arc the pair has merged into one tangential geodesic
  const FanSearchResult end = fan.search(kPhiL5);
  CHECK(std::abs(end.best_length - kEllL5) <= 1e-8);
  CHECK(end.minimizers() == 1);
  CHECK(std::abs(end.best_angles.front() - pi / 2) <= 1e-3);

  const FanSearchResult past = fan.search(kPhiL5 + kArcOffset);
  REQUIRE(past.connections.size() >= 3);
  const double a = past.connections[0].angle, b = past.connections[1].angle;
  CHECK(std::abs(past.connections[1].length - past.connections[0].length) <= 1e-10);
  // one leaves upward of the parallel, the other downward, symmetric about π/2
  CHECK((a - pi / 2) * (b - pi / 2) < 0.0);
  CHECK(std::abs((a - pi / 2) + (b - pi / 2)) <= 1e-6);
  // the third, past its conjugate point, is longer but only like ε^{3/2}
  const double excess = past.connections[2].length - past.best_length;
  CHECK(excess > 1e-8);
  CHECK(excess < 1e-5);

  // before the arc the minimizer is unique
  const FanSearchResult before = fan.search(0.5 * kPhiL5);
  CHECK(before.minimizers() == 1);
  CHECK(before.tie_margin() > 1e-5);
}

TEST_CASE("audits agree with the predicted shapes") {
  for (auto [surface, t] : {std::pair{&l5(), -0.3}, std::pair{&l2(), -0.3}, std::pair{&tamura(), -0.5},
                            std::pair{&tamura(), 0.0}}) {
    const SurfacePoint q{t, 0.4};
    const CutLocusShape shape = cut_locus(*surface, q, build_profile(*surface));
    const VerificationReport rep = audit_cut_point(*surface, q, shape);
    INFO(surface->descriptor().tag(), " t=", t, "\n", nlohmann::json(rep).dump(1));
    CHECK(rep.passed());
    CHECK(rep.findings.size() >= 3);
  }
  // nothing to audit without a prediction
  CutLocusShape none;
  none.variant = CutLocusVariant::Undetermined;
  CHECK_FALSE(audit_cut_point(l2(), {0.5, 0}, none).passed());
}

TEST_CASE("onset scan along the opposite parallel") {
  CHECK(std::abs(scan_parallel_for_cut(l5(), {-0.3, 0}) - kPhiL5) <= 2e-3);
  CHECK(std::abs(scan_parallel_for_cut(tamura(), {-0.5, 1.0}) - 2.381468812533081) <= 2e-3);
  // below t_π = 0 on λ=2 ties only happen at θ = π
  CHECK_THROWS_AS(scan_parallel_for_cut(l2(), {-0.3, 0}), NotFound);
}

TEST_CASE("argument checks and unreachable targets") {
  OracleOptions o;
  o.fan_size = 32;
  CHECK_THROWS_AS(distance(l2(), {0, 0}, {0.1, 0}, o), OutOfRange);
  CHECK_THROWS_AS(ParallelFan(l2(), {0, 0}, 1.0, -1.0), OutOfRange);
  CHECK_THROWS_AS(ParallelFan(l2(), {0, 0}, 1.0, 0.5).search(0.0), NoHit);
  CHECK_THROWS_AS(scan_parallel_for_cut(l2(), {-0.3, 0}, 1), OutOfRange);
}

TEST_CASE("property: symmetry") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(-0.8, 0.8), th(0.0, 2 * pi);
  for (int i = 0; i < 8; ++i) {
    const SurfacePoint a{t(rng), th(rng)}, b{t(rng), th(rng)};
    const double ab = distance(l5(), a, b, light()).best_length;
    const double ba = distance(l5(), b, a, light()).best_length;
    INFO("a=(", a.t, ",", a.theta, ") b=(", b.t, ",", b.theta, ")");
    CHECK(std::abs(ab - ba) <= 1e-8);
  }
}

TEST_CASE("property: triangle inequality and explicit competitors") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(-1.0, 1.0), th(-pi, pi);
  for (int i = 0; i < 5; ++i) {
    const SurfacePoint a{t(rng), th(rng)}, b{t(rng), th(rng)}, c{t(rng), th(rng)};
    const double ab = distance(tamura(), a, b, light()).best_length;
    const double bc = distance(tamura(), b, c, light()).best_length;
    const double ac = distance(tamura(), a, c, light()).best_length;
    CHECK(ac <= ab + bc + 1e-8);
    // along the parallel of a, then along the meridian
    const double gap = std::abs(std::remainder(c.theta - a.theta, 2 * pi));
    CHECK(ac <= tamura().m(a.t).value * gap + std::abs(c.t - a.t) + 1e-8);
    CHECK(ac >= std::abs(c.t - a.t) - 1e-8);
  }
}

TEST_CASE("property: from the equator, cover ties stay on the equator") {
  OracleOptions cover = light();
  cover.max_winding = 0;
  const SurfacePoint q{0.0, 0.0};
  const double limit = phi_upper_limit(tamura());
  // off the equator: a single shortest geodesic on the universal cover
  const ParallelFan off(tamura(), q, 0.2, length_budget(tamura(), q, {0.2, 2 * pi}, 1), cover);
  for (double theta : {0.5, 1.5, 2.5, 3.5, 5.0}) {
    INFO("theta=", theta);
    CHECK(off.search(theta).minimizers() == 1);
  }
  // on it past the conjugate distance: the reflected pair
  const ParallelFan on(tamura(), q, 0.0, length_budget(tamura(), q, {0.0, 2 * pi}, 1), cover);
  CHECK(on.search(0.5 * limit).minimizers() == 1);
  CHECK(on.search(limit + 0.3).minimizers() == 2);
}

TEST_CASE("report JSON") {
  const CutLocusShape shape = cut_locus(l5(), {-0.3, 0}, build_profile(l5(), 40));
  const nlohmann::json j = audit_cut_point(l5(), {-0.3, 0}, shape);
  CHECK(j.at("passed").get<bool>());
  CHECK(j.at("findings").size() == 6);
  CHECK(j.at("findings")[0].at("expected").get<double>() == doctest::Approx(kEllL5).epsilon(1e-9));
  const nlohmann::json r = distance(l2(), {0, 0}, {0.1, 0});
  CHECK(r.at("best_angles").size() == 1);
  CHECK(r.at("per_lift").contains("0"));
}
