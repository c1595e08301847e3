#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "cutloc/cutlocus.hpp"
#include "cutloc/geodesic.hpp"
#include "cutloc/surface.hpp"

// Distance and cut-point checks by brute-force geodesic shooting, independent
// of the closed-form cut locus.
namespace cutloc::oracle {

struct OracleOptions {
  int fan_size = 512;
  /// Lifts θ + 2πk with |k| ≤ max_winding; 0 gives universal-cover distances.
  int max_winding = 2;
  /// Lengths within tie_tol of the best count as minimizers.
  double tie_tol = 1e-5;
  /// Minimizers closer than this in direction angle are one minimizer.
  double angle_separation = 1e-3;
  /// Integration for refinement shots; the fan itself runs 100x looser.
  Tolerances ode{};
  /// Refine every candidate. Otherwise candidates that cannot undercut the
  /// second distinct connection are skipped, so connections and per_lift
  /// list only what was refined.
  bool exhaustive = false;
};

/// One geodesic from q that ends on the target: direction, length, lift.
struct Connection {
  double angle = 0.0;
  double length = 0.0;
  int winding = 0;
};

struct FanSearchResult {
  SurfacePoint target;
  double best_length = kInfinity;
  /// Distinct directions whose length is within tie_tol of best_length.
  std::vector<double> best_angles;
  /// Winding k → shortest connection to the lift θ + 2πk (∞ if none).
  std::map<int, double> per_lift;
  /// Shortest connection whose direction differs from every best angle.
  double second_length = kInfinity;
  /// Every refined connection, one per direction, shortest first.
  std::vector<Connection> connections;

  int minimizers() const { return static_cast<int>(best_angles.size()); }
  /// second_length − best_length.
  double tie_margin() const { return second_length - best_length; }
};

/// Fan of geodesics from q with every crossing of the parallel t = level
/// recorded; answers distance queries to any point on that parallel.
class ParallelFan {
 public:
  ParallelFan(const SurfaceModel& s, SurfacePoint q, double level, double length_budget, OracleOptions opt = {});
  ~ParallelFan();
  ParallelFan(ParallelFan&&) noexcept;
  ParallelFan& operator=(ParallelFan&&) noexcept;

  /// All connections to (level, theta + 2πk), |k| ≤ max_winding. Throws NoHit if none.
  FanSearchResult search(double theta) const;

  double level() const;
  double length_budget() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Length budget 4·(|Δt| + m(0)·(|Δθ| + 2π·max_winding)).
double length_budget(const SurfaceModel& s, SurfacePoint q, SurfacePoint x, int max_winding);

/// Distance from q to x by fan search. Throws NoHit.
FanSearchResult distance(const SurfaceModel& s, SurfacePoint q, SurfacePoint x, const OracleOptions& opt = {});

struct Finding {
  std::string check;
  SurfacePoint point;
  bool passed = false;
  int minimizers = 0;
  double best_length = kInfinity;
  double second_length = kInfinity;
  /// Reference value the finding compares against (NaN if none).
  double expected = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

struct VerificationReport {
  std::vector<Finding> findings;
  bool passed() const;
};

/// Offset into the predicted arc at which the first cut point's α/β pair is
/// resolved. At the arc's end the two minimizers coincide (a conjugate
/// point), and their directions separate only like √ε.
inline constexpr double kArcOffset = 1e-3;

/// Checks the prediction with fan searches on the parallel t = −t(q) (and
/// the opposite meridian): two minimizers inside the arc and just past its
/// end, a single strict minimizer before it, and no connection shorter than
/// the predicted first cut distance.
VerificationReport audit_cut_point(const SurfaceModel& s, SurfacePoint q, const CutLocusShape& predicted,
                                   const OracleOptions& opt = {});

/// Smallest θ − θ(q) in (0, π) on the parallel t = −t(q) at which two
/// distinct minimizers tie: a grid of `resolution` points then bisection.
/// Throws NotFound when no grid point ties.
double scan_parallel_for_cut(const SurfaceModel& s, SurfacePoint q, int resolution = 64,
                             const OracleOptions& opt = {});

void to_json(nlohmann::json& j, const Finding& f);
void to_json(nlohmann::json& j, const VerificationReport& r);
void to_json(nlohmann::json& j, const FanSearchResult& r);

}  // namespace cutloc::oracle
