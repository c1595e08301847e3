#pragma once

#include <limits>
#include <string>
#include <string_view>

#include "json.hpp"

#include "cutloc/expr.hpp"
#include "cutloc/jet.hpp"

namespace cutloc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Point in (t, theta) coordinates. On the universal cover theta is unbounded;
/// on the cylinder it is understood modulo 2π.
struct SurfacePoint {
  double t = 0.0;
  double theta = 0.0;
};

enum class SurfaceKind { Tamura, Lambda, Custom };

/// Serializable recipe for a surface: {kind, params|source, t_max_scan}.
struct SurfaceDescriptor {
  SurfaceKind kind = SurfaceKind::Tamura;
  double lambda = 2.0;      // Lambda only
  std::string source;       // Custom only
  double t_max_scan = 50.0;

  static SurfaceDescriptor tamura();
  static SurfaceDescriptor lambda_family(double lambda);
  static SurfaceDescriptor custom(std::string source, double t_max_scan = 50.0);

  /// Warping function as an expression string.
  std::string expression_source() const;
  /// Short tag such as "lambda:2" or "custom:2+cos(t)".
  std::string tag() const;
};

/// Parses "tamura", "lambda:<λ>", "custom:<expr>" (or a bare expression).
SurfaceDescriptor parse_surface_tag(std::string_view tag);

void to_json(nlohmann::json& j, const SurfaceDescriptor& d);
void from_json(const nlohmann::json& j, SurfaceDescriptor& d);

/// Outcome of the t₀ search. `value` is +inf when m' stays negative up to the
/// scan horizon, in which case `horizon_limited` is set.
struct T0Result {
  double value = kInfinity;
  bool horizon_limited = false;
};

/// Validated warping function with cached constants. Immutable.
class SurfaceModel {
 public:
  /// Throws NotPositive, NotEven, EvaluationDomainError, DegenerateAtZero.
  static SurfaceModel build(const SurfaceDescriptor& descriptor);

  Jet2 m(double t) const { return expression_.eval_jet(t); }

  double t0() const { return t0_.value; }
  bool t0_finite() const { return t0_.value < kInfinity; }
  bool horizon_limited() const { return t0_.horizon_limited; }
  double m_at_0() const { return m_at_0_; }
  /// m(t₀) if t₀ is finite, otherwise m at the scan horizon.
  double inf_m() const { return inf_m_; }
  /// Scan horizon actually used: the requested one, cut short where m overflows.
  double t_max_scan() const { return horizon_; }
  bool horizon_truncated() const { return horizon_ < descriptor_.t_max_scan; }
  /// Largest t on which root searches over (0, t₀) operate.
  double decreasing_limit() const { return t0_finite() ? t0() : t_max_scan(); }
  bool evenness_certified() const { return evenness_certified_; }

  const SurfaceDescriptor& descriptor() const { return descriptor_; }
  const Expression& expression() const { return expression_; }

 private:
  SurfaceModel(SurfaceDescriptor d, Expression e) : descriptor_(std::move(d)), expression_(std::move(e)) {}

  SurfaceDescriptor descriptor_;
  Expression expression_;
  T0Result t0_;
  double m_at_0_ = 0.0;
  double inf_m_ = 0.0;
  double horizon_ = 0.0;
  bool evenness_certified_ = false;
};

inline SurfaceModel build_surface(const SurfaceDescriptor& d) { return SurfaceModel::build(d); }

/// G = -m''/m.
double gaussian_curvature(const SurfaceModel& s, double t);

/// Smallest t > 0 with m'(t) = 0 and m' < 0 on (0, t): sign scan at step 1e-3
/// followed by bisection. Returns 0 when m' is positive just after 0.
T0Result find_t0(const SurfaceModel& s);

/// Unique root of m(t) = ν in (0, t₀). Throws OutOfRange unless
/// inf_m < ν < m(0).
double xi(const SurfaceModel& s, double nu);

}  // namespace cutloc
