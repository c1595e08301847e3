#pragma once

#include <vector>

#include "cutloc/surface.hpp"

namespace cutloc {

/// Evaluations refuse ν closer than this to either end of (m(t₀), m(0)).
inline constexpr double kNuMargin = 1e-9;

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
};

/// θ-advance between consecutive equator crossings of the geodesic with
/// Clairaut constant ν: 2∫₀^ξ ν / (m√(m²−ν²)) dt, by tanh-sinh quadrature.
/// Throws OutOfRange, QuadratureStall.
double phi(const SurfaceModel& s, double nu, const QuadratureOptions& opt = {});

/// Arc length of the same subarc: 2∫₀^ξ m / √(m²−ν²) dt.
double ell(const SurfaceModel& s, double nu, const QuadratureOptions& opt = {});

/// Independent route for φ and ℓ: substitution u = √(ξ−t) removes the
/// endpoint singularity, then adaptive Gauss–Kronrod.
double phi_gauss_kronrod(const SurfaceModel& s, double nu);
double ell_gauss_kronrod(const SurfaceModel& s, double nu);

/// φ and ℓ at the top of the domain, ν → m(0)⁻: π/(m(0)√G(0)) and π/√G(0).
/// Infinite when G(0) ≤ 0.
double phi_upper_limit(const SurfaceModel& s);
double ell_upper_limit(const SurfaceModel& s);

/// Open ν-interval on which φ is evaluated, already shrunk by kNuMargin.
struct NuDomain {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(lo < hi); }
};
NuDomain nu_domain(const SurfaceModel& s);

struct HalfPeriodProfile {
  const SurfaceModel* surface = nullptr;
  std::vector<double> nu_grid;
  std::vector<double> xi_values;
  std::vector<double> phi_values;
  std::vector<double> ell_values;
};

/// Cell-centred uniform grid of `points` values of ν over the domain (empty
/// when the domain is). Evaluation order does not affect the output.
HalfPeriodProfile build_profile(const SurfaceModel& s, int points = 200, const QuadratureOptions& opt = {});

/// Profile on an explicit grid (sorted ascending, inside the domain).
HalfPeriodProfile build_profile(const SurfaceModel& s, std::vector<double> nu_grid,
                                const QuadratureOptions& opt = {});

/// Smallest t in [0, t₀) with φ(m(t)) = π, or 0 when φ∘m ≥ π throughout.
/// Throws HypothesesNotVerified unless check_hypotheses passes on the profile.
double t_pi(const SurfaceModel& s, const HalfPeriodProfile& profile);

/// The ν with φ(ν) = π bounding the region φ ≥ π from above, or m(0) when
/// φ ≥ π on the whole domain. No hypothesis check.
double nu_pi(const SurfaceModel& s, const HalfPeriodProfile& profile);

}  // namespace cutloc
