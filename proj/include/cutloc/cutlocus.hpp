#pragma once

#include <array>
#include <optional>
#include <string>

#include "json.hpp"

#include "cutloc/halfperiod.hpp"
#include "cutloc/surface.hpp"

namespace cutloc {

/// Numerical certificate that the cut locus of every equator point lies on
/// the equator: G(0) > 0 and φ non-increasing, with m′ < 0 on (0, t₀).
struct HypothesisReport {
  bool curvature_positive_on_equator = false;
  bool phi_decreasing = false;
  bool m_prime_negative = false;
  bool verdict = false;
  /// The two checks are equivalent to the equator property only when m′ ≠ 0
  /// on all of (0, ∞); with finite t₀ they certify it on |t| < t₀.
  bool equivalence_exact = false;

  double curvature_at_equator = 0.0;
  /// Largest forward-difference slope of φ over the grid (≤ tolerance passes).
  double max_phi_slope = 0.0;
  double phi_slope_tolerance = 1e-8;
  /// Largest sampled m′ on (0, t₀) (negative passes).
  double max_m_prime = 0.0;
  int grid_points = 0;

  std::string summary() const;
};

HypothesisReport check_hypotheses(const SurfaceModel& s, const HalfPeriodProfile& profile);

enum class CutLocusVariant { MeridianOnly, MeridianPlusParallel, EmptyCover, RaySetCover, Undetermined };

const char* variant_name(CutLocusVariant v);

/// Symbolic cut locus. On the cylinder, θ values are in [0, 2π) and shifted
/// by θ(q). On the universal cover, RaySetCover means the two rays
/// {t̃ = parallel_t, |θ̃ − θ(q)| ≥ ray_start}.
struct CutLocusShape {
  CutLocusVariant variant = CutLocusVariant::Undetermined;
  std::optional<double> meridian_theta;
  std::optional<double> parallel_t;
  std::optional<std::array<double, 2>> theta_interval;
  std::optional<double> ray_start;
  std::optional<double> first_cut_distance;
  std::string note;
  HypothesisReport hypotheses;
};

/// Cut locus on the cylinder. Throws HypothesesNotVerified.
CutLocusShape cut_locus(const SurfaceModel& s, SurfacePoint q, const HalfPeriodProfile& profile);

/// Cut locus on the universal cover. Throws HypothesesNotVerified.
CutLocusShape cover_cut_locus(const SurfaceModel& s, SurfacePoint q, const HalfPeriodProfile& profile);

struct FirstCutPoint {
  SurfacePoint point;
  double distance = 0.0;
};

/// Nearest cut point on the opposite parallel and its distance ℓ(m(u)).
/// Needs 0 < |t(q)| < t₀. Throws HypothesesNotVerified, OutOfRange.
FirstCutPoint first_cut_point(const SurfaceModel& s, SurfacePoint q, const HalfPeriodProfile& profile);

/// Whether G ≤ 0 on every sample of (t₀, t_max_scan]; false when t₀ is infinite.
bool curvature_nonpositive_beyond_t0(const SurfaceModel& s);

void to_json(nlohmann::json& j, const HypothesisReport& r);
void to_json(nlohmann::json& j, const CutLocusShape& c);

}  // namespace cutloc
