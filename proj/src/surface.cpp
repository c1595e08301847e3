#include "cutloc/surface.hpp"

#include <cmath>
#include <cstdio>

#include "cutloc/errors.hpp"

namespace cutloc {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr double kScanStep = 1e-3;
constexpr double kEvenRelTol = 1e-12;
constexpr double kSlopeAtZeroTol = 1e-10;
constexpr double kT0DetectionTol = 1e-10;
constexpr int kValidationSamples = 4001;

// e^{-t²} underflows past |t| ≈ 27; keep the Tamura horizon inside double range.
constexpr double kTamuraHorizon = 25.0;

T0Result scan_t0(const Expression& m, double horizon) {
  const double slope_start = m.eval_jet(kScanStep).d1;
  if (!(slope_start < 0.0)) {
    if (std::abs(slope_start) <= kSlopeAtZeroTol && std::abs(m.eval_jet(0.0).d2) <= kSlopeAtZeroTol)
      throw DegenerateAtZero("m' vanishes near t=0 (|m'(" + fmt(kScanStep) + ")|=" +
                             fmt(std::abs(slope_start)) + ")");
    return {0.0, false};
  }
  // Rounding in m' (cancellation in the jet arithmetic) makes its sign
  // unreliable once |m'| is tiny, so the neck only counts as ended where m'
  // is positive beyond the detection tolerance. The root is then bracketed by
  // the last sample that was still strictly negative.
  const auto steps = static_cast<long>(std::ceil(horizon / kScanStep));
  double last_negative = kScanStep;
  double after_negative = kScanStep;
  for (long i = 2; i <= steps; ++i) {
    const double t = std::min(horizon, static_cast<double>(i) * kScanStep);
    const Jet2 j = m.eval_jet(t);
    if (j.d1 < 0.0) {
      last_negative = t;
      after_negative = std::min(horizon, static_cast<double>(i + 1) * kScanStep);
      continue;
    }
    if (j.d1 <= kT0DetectionTol * j.value) continue;
    double lo = last_negative, hi = after_negative;
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (m.eval_jet(mid).d1 < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double dlo = std::abs(m.eval_jet(lo).d1), dhi = std::abs(m.eval_jet(hi).d1);
    return {dlo < dhi ? lo : hi, false};
  }
  return {kInfinity, true};
}

}  // namespace

SurfaceDescriptor SurfaceDescriptor::tamura() {
  SurfaceDescriptor d;
  d.kind = SurfaceKind::Tamura;
  d.t_max_scan = kTamuraHorizon;
  return d;
}

SurfaceDescriptor SurfaceDescriptor::lambda_family(double lambda) {
  if (!(lambda > 1.0)) throw OutOfRange("lambda must exceed 1, got " + fmt(lambda));
  SurfaceDescriptor d;
  d.kind = SurfaceKind::Lambda;
  d.lambda = lambda;
  return d;
}

SurfaceDescriptor SurfaceDescriptor::custom(std::string source, double t_max_scan) {
  SurfaceDescriptor d;
  d.kind = SurfaceKind::Custom;
  d.source = std::move(source);
  d.t_max_scan = t_max_scan;
  return d;
}

std::string SurfaceDescriptor::expression_source() const {
  switch (kind) {
    case SurfaceKind::Tamura:
      return "exp(-t^2)";
    case SurfaceKind::Lambda:
      return "cosh(t)/sqrt(1+" + fmt(lambda) + "*sinh(t)^2)";
    case SurfaceKind::Custom:
      return source;
  }
  return source;
}

std::string SurfaceDescriptor::tag() const {
  switch (kind) {
    case SurfaceKind::Tamura:
      return "tamura";
    case SurfaceKind::Lambda: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", lambda);
      return std::string("lambda:") + buf;
    }
    case SurfaceKind::Custom:
      return "custom:" + source;
  }
  return source;
}

SurfaceDescriptor parse_surface_tag(std::string_view tag) {
  if (tag == "tamura") return SurfaceDescriptor::tamura();
  constexpr std::string_view lambda_prefix = "lambda:";
  constexpr std::string_view custom_prefix = "custom:";
  if (tag.substr(0, lambda_prefix.size()) == lambda_prefix) {
    const std::string rest(tag.substr(lambda_prefix.size()));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) throw OutOfRange("malformed lambda tag '" + std::string(tag) + "'");
    return SurfaceDescriptor::lambda_family(value);
  }
  if (tag.substr(0, custom_prefix.size()) == custom_prefix)
    return SurfaceDescriptor::custom(std::string(tag.substr(custom_prefix.size())));
  return SurfaceDescriptor::custom(std::string(tag));
}

void to_json(nlohmann::json& j, const SurfaceDescriptor& d) {
  switch (d.kind) {
    case SurfaceKind::Tamura:
      j = {{"kind", "tamura"}};
      break;
    case SurfaceKind::Lambda:
      j = {{"kind", "lambda"}, {"params", {{"lambda", d.lambda}}}};
      break;
    case SurfaceKind::Custom:
      j = {{"kind", "custom"}, {"source", d.source}};
      break;
  }
  j["t_max_scan"] = d.t_max_scan;
}

void from_json(const nlohmann::json& j, SurfaceDescriptor& d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tamura") {
    d = SurfaceDescriptor::tamura();
  } else if (kind == "lambda") {
    d = SurfaceDescriptor::lambda_family(j.at("params").at("lambda").get<double>());
  } else if (kind == "custom") {
    d = SurfaceDescriptor::custom(j.at("source").get<std::string>());
  } else {
    throw OutOfRange("unknown surface kind '" + kind + "'");
  }
  if (j.contains("t_max_scan")) d.t_max_scan = j.at("t_max_scan").get<double>();
}

NotPositive::NotPositive(double t) : Error("warping function not positive at t=" + fmt(t)), t_(t) {}
NotEven::NotEven(double t) : Error("warping function not even at t=" + fmt(t)), t_(t) {}
std::string EvaluationDomainError::format(double t) { return fmt(t); }

SurfaceModel SurfaceModel::build(const SurfaceDescriptor& descriptor) {
  if (!(descriptor.t_max_scan > 0.0) || !std::isfinite(descriptor.t_max_scan))
    throw OutOfRange("t_max_scan must be positive and finite");
  SurfaceModel s(descriptor, parse(descriptor.expression_source()));
  double horizon = descriptor.t_max_scan;

  for (int i = 0; i < kValidationSamples; ++i) {
    const double t = descriptor.t_max_scan * static_cast<double>(i) / (kValidationSamples - 1);
    double plus = 0.0, minus = 0.0;
    try {
      plus = s.m(t).value;
      minus = s.m(-t).value;
    } catch (const NonFiniteResult&) {
      // growth past double range (e.g. exp(t^2)): the scan stops at the last good sample
      if (i < 2) throw;
      horizon = descriptor.t_max_scan * static_cast<double>(i - 1) / (kValidationSamples - 1);
      break;
    }
    if (!(plus > 0.0)) throw NotPositive(t);
    if (!(minus > 0.0)) throw NotPositive(-t);
    if (std::abs(plus - minus) > kEvenRelTol * plus) throw NotEven(t);
  }
  const Jet2 at0 = s.m(0.0);
  if (std::abs(at0.d1) > kSlopeAtZeroTol) throw NotEven(0.0);
  s.horizon_ = horizon;
  s.evenness_certified_ = true;
  s.m_at_0_ = at0.value;
  s.t0_ = scan_t0(s.expression_, horizon);
  if (s.t0_.value == 0.0) {
    s.inf_m_ = s.m_at_0_;
  } else {
    s.inf_m_ = s.m(s.decreasing_limit()).value;
  }
  return s;
}

double gaussian_curvature(const SurfaceModel& s, double t) {
  const Jet2 j = s.m(t);
  return -j.d2 / j.value;
}

T0Result find_t0(const SurfaceModel& s) { return scan_t0(s.expression(), s.t_max_scan()); }

double xi(const SurfaceModel& s, double nu) {
  if (!(nu > s.inf_m() && nu < s.m_at_0()))
    throw OutOfRange("nu=" + fmt(nu) + " outside (" + fmt(s.inf_m()) + ", " + fmt(s.m_at_0()) + ")");
  double lo = 0.0, hi = s.decreasing_limit();
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (s.m(mid).value >= nu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace cutloc
