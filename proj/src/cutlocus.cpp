#include "cutloc/cutlocus.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "cutloc/errors.hpp"

namespace cutloc {

namespace {

using std::numbers::pi;

constexpr int kSlopeSamples = 4000;
// same threshold the t₀ scan uses to tell a tiny m′ from rounding noise
constexpr double kMPrimeNoise = 1e-10;
constexpr double kT0Match = 1e-9;

double wrap_2pi(double theta) {
  double r = std::fmod(theta, 2.0 * pi);
  if (r < 0.0) r += 2.0 * pi;
  return r;
}

HypothesisReport verified(const SurfaceModel& s, const HalfPeriodProfile& profile) {
  HypothesisReport r = check_hypotheses(s, profile);
  if (!r.verdict) throw HypothesesNotVerified(r.summary());
  return r;
}

bool at_finite_t0(const SurfaceModel& s, double a) { return s.t0_finite() && std::abs(a - s.t0()) <= kT0Match; }

// φ(m(a)) and ℓ(m(a)), switching to the ν → m(0) limits once m(a) is inside
// the refused margin below m(0).
std::pair<double, double> phi_ell_at_height(const SurfaceModel& s, double a) {
  const double nu = s.m(a).value;
  if (a == 0.0 || nu > nu_domain(s).hi) return {phi_upper_limit(s), ell_upper_limit(s)};
  return {phi(s, nu), ell(s, nu)};
}

}  // namespace

std::string HypothesisReport::summary() const {
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "G(0)=%.6g (%s); max phi slope %.3g over %d points (%s); max m' on (0,t0) %.3g (%s); verdict %s",
                curvature_at_equator, curvature_positive_on_equator ? "ok" : "FAIL", max_phi_slope, grid_points,
                phi_decreasing ? "ok" : "FAIL", max_m_prime, m_prime_negative ? "ok" : "FAIL",
                verdict ? "pass" : "fail");
  return buf;
}

HypothesisReport check_hypotheses(const SurfaceModel& s, const HalfPeriodProfile& profile) {
  HypothesisReport r;
  r.curvature_at_equator = gaussian_curvature(s, 0.0);
  r.curvature_positive_on_equator = r.curvature_at_equator > 0.0;
  r.equivalence_exact = !s.t0_finite();

  if (s.t0() > 0.0) {
    const double limit = s.decreasing_limit();
    double worst = -kInfinity;
    bool ok = true;
    for (int k = 1; k < kSlopeSamples; ++k) {
      const double t = limit * k / kSlopeSamples;
      const Jet2 j = s.m(t);
      worst = std::max(worst, j.d1);
      if (j.d1 > kMPrimeNoise * j.value) ok = false;
    }
    r.max_m_prime = worst;
    r.m_prime_negative = ok;
  }

  const std::size_t n = profile.nu_grid.size();
  r.grid_points = static_cast<int>(n);
  if (n >= 2) {
    double worst = -kInfinity;
    for (std::size_t k = 1; k < n; ++k) {
      const double slope =
          (profile.phi_values[k] - profile.phi_values[k - 1]) / (profile.nu_grid[k] - profile.nu_grid[k - 1]);
      worst = std::max(worst, slope);
    }
    r.max_phi_slope = worst;
    r.phi_decreasing = worst <= r.phi_slope_tolerance;
  }
  r.verdict = r.curvature_positive_on_equator && r.phi_decreasing && r.m_prime_negative;
  return r;
}

const char* variant_name(CutLocusVariant v) {
  switch (v) {
    case CutLocusVariant::MeridianOnly:
      return "MeridianOnly";
    case CutLocusVariant::MeridianPlusParallel:
      return "MeridianPlusParallel";
    case CutLocusVariant::EmptyCover:
      return "EmptyCover";
    case CutLocusVariant::RaySetCover:
      return "RaySetCover";
    case CutLocusVariant::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

bool curvature_nonpositive_beyond_t0(const SurfaceModel& s) {
  if (!s.t0_finite()) return false;
  const double lo = s.t0(), hi = s.t_max_scan();
  if (!(hi > lo)) return false;
  for (int k = 1; k <= kSlopeSamples; ++k) {
    const double t = lo + (hi - lo) * k / kSlopeSamples;
    if (gaussian_curvature(s, t) > 0.0) return false;
  }
  return true;
}

CutLocusShape cut_locus(const SurfaceModel& s, SurfacePoint q, const HalfPeriodProfile& profile) {
  CutLocusShape c;
  c.hypotheses = verified(s, profile);
  const double a = std::abs(q.t);
  c.meridian_theta = wrap_2pi(pi + q.theta);

  if (at_finite_t0(s, a)) {
    c.variant = CutLocusVariant::MeridianOnly;
    c.note = "|t(q)| = t0";
    return c;
  }
  if (a > s.decreasing_limit()) {
    if (curvature_nonpositive_beyond_t0(s)) {
      c.variant = CutLocusVariant::MeridianOnly;
      c.note = "|t(q)| > t0 with G <= 0 beyond t0";
    } else {
      c.meridian_theta.reset();
      c.variant = CutLocusVariant::Undetermined;
      c.note = s.t0_finite() ? "|t(q)| > t0 and G changes sign beyond t0" : "|t(q)| beyond the scan horizon";
    }
    return c;
  }

  const double tp = t_pi(s, profile);
  if (a < tp) {
    const auto [ph, len] = phi_ell_at_height(s, a);
    const double base = wrap_2pi(q.theta);
    c.variant = CutLocusVariant::MeridianPlusParallel;
    c.parallel_t = -q.t;
    c.theta_interval = std::array<double, 2>{base + ph, base + 2.0 * pi - ph};
    c.first_cut_distance = len;
  } else {
    c.variant = CutLocusVariant::MeridianOnly;
  }
  return c;
}

CutLocusShape cover_cut_locus(const SurfaceModel& s, SurfacePoint q, const HalfPeriodProfile& profile) {
  CutLocusShape c;
  c.hypotheses = verified(s, profile);
  const double a = std::abs(q.t);

  if (at_finite_t0(s, a)) {
    c.variant = CutLocusVariant::EmptyCover;
    c.note = "|t(q)| = t0";
    return c;
  }
  if (a > s.decreasing_limit()) {
    if (curvature_nonpositive_beyond_t0(s)) {
      c.variant = CutLocusVariant::EmptyCover;
      c.note = "|t(q)| > t0 with G <= 0 beyond t0";
    } else {
      c.variant = CutLocusVariant::Undetermined;
      c.note = s.t0_finite() ? "|t(q)| > t0 and G changes sign beyond t0" : "|t(q)| beyond the scan horizon";
    }
    return c;
  }
  const auto [ph, len] = phi_ell_at_height(s, a);
  c.variant = CutLocusVariant::RaySetCover;
  c.parallel_t = -q.t;
  c.ray_start = ph;
  c.first_cut_distance = len;
  if (a == 0.0) c.note = "q on the equator: rays start at the first conjugate point";
  return c;
}

FirstCutPoint first_cut_point(const SurfaceModel& s, SurfacePoint q, const HalfPeriodProfile& profile) {
  verified(s, profile);
  const double a = std::abs(q.t);
  if (!(a > 0.0 && a < s.decreasing_limit()) || at_finite_t0(s, a))
    throw OutOfRange("first_cut_point needs 0 < |t(q)| < t0");
  const auto [ph, len] = phi_ell_at_height(s, a);
  return {{-q.t, q.theta + ph}, len};
}

void to_json(nlohmann::json& j, const HypothesisReport& r) {
  j = {{"curvature_positive_on_equator", r.curvature_positive_on_equator},
       {"phi_decreasing", r.phi_decreasing},
       {"m_prime_negative", r.m_prime_negative},
       {"verdict", r.verdict},
       {"equivalence_exact", r.equivalence_exact},
       {"evidence",
        {{"curvature_at_equator", r.curvature_at_equator},
         {"max_phi_slope", r.max_phi_slope},
         {"phi_slope_tolerance", r.phi_slope_tolerance},
         {"max_m_prime", r.max_m_prime},
         {"grid_points", r.grid_points}}}};
}

void to_json(nlohmann::json& j, const CutLocusShape& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  j = {{"variant", variant_name(c.variant)},
       {"meridian_theta", opt(c.meridian_theta)},
       {"parallel_t", opt(c.parallel_t)},
       {"theta_interval", c.theta_interval ? nlohmann::json(*c.theta_interval) : nlohmann::json(nullptr)},
       {"ray_start", opt(c.ray_start)},
       {"first_cut_distance", opt(c.first_cut_distance)},
       {"undetermined", c.variant == CutLocusVariant::Undetermined},
       {"note", c.note},
       {"hypothesis_report", c.hypotheses}};
}

}  // namespace cutloc
