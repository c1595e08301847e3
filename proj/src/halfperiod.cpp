#include "cutloc/halfperiod.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cutloc/cutlocus.hpp"
#include "cutloc/errors.hpp"
#include "cutloc/quadrature.hpp"

namespace cutloc {

namespace {

using std::numbers::pi;

// For τ below this the gap m(ξ−τ) − m(ξ) is computed as the integral of −m′
// over [ξ−τ, ξ] (8-point Gauss–Legendre, exact to rounding on so short a
// panel). The direct difference cancels: its absolute error ~1e-16 becomes
// an error of order 1e-16·|m′|^{-3/2}·τ^{-1/2} in φ.
constexpr double kGapPanel = 0.05;

// The integrands are written against the turning height ξ̂ found by
// bisection and ν̂ = m(ξ̂) ≥ ν. Using ν̂ instead of ν keeps the gap exactly
// zero at τ = 0; φ(ν̂) − φ(ν) is of order φ′·ulp(ν).
class Integrand {
 public:
  Integrand(const SurfaceModel& s, double nu) : s_(s) {
    const NuDomain d = nu_domain(s);
    if (d.empty()) throw OutOfRange("the surface has an empty half-period domain (t0 = 0)");
    if (!(nu >= d.lo && nu <= d.hi))
      throw OutOfRange("nu=" + std::to_string(nu) + " outside [" + std::to_string(d.lo) + ", " +
                       std::to_string(d.hi) + "]");
    xi_ = xi(s, nu);
    nu_ = s.m(xi_).value;
  }

  double turning_height() const { return xi_; }

  struct Sample {
    double m;
    double root;  // √(m² − ν²) as √((m−ν)(m+ν))
  };

  Sample at(double tau) const {
    double gap, m;
    if (tau < kGapPanel) {
      // on the reference interval, so that τ below ulp(ξ) still scales the result
      gap = -0.5 * tau *
            boost::math::quadrature::gauss<double, 8>::integrate(
                [&](double r) { return s_.m(xi_ - 0.5 * tau * (1.0 + r)).d1; }, -1.0, 1.0);
      m = nu_ + gap;
    } else {
      m = s_.m(xi_ - tau).value;
      gap = m - nu_;
    }
    return {m, std::sqrt(gap * (m + nu_))};
  }

  double phi_density(double tau) const {
    const Sample p = at(tau);
    return 2.0 * nu_ / (p.m * p.root);
  }
  double ell_density(double tau) const {
    const Sample p = at(tau);
    return 2.0 * p.m / p.root;
  }

 private:
  const SurfaceModel& s_;
  double xi_ = 0.0;
  double nu_ = 0.0;
};

template <class Density>
double tanh_sinh_route(const Integrand& f, Density density, const QuadratureOptions& opt) {
  quad::TanhSinhOptions o;
  o.abs_tol = opt.abs_tol;
  o.rel_tol = opt.rel_tol;
  // τ = ξ − t; the singular endpoint is τ = 0 and its distance arrives exactly
  return quad::tanh_sinh([&](double, double tau, double) { return density(tau); }, 0.0, f.turning_height(), o)
      .value;
}

template <class Density>
double gauss_kronrod_route(const Integrand& f, Density density) {
  // τ = u²: dτ = 2u du cancels the 1/√τ blow-up
  auto g = [&](double u) { return density(u * u) * 2.0 * u; };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, 0.0, std::sqrt(f.turning_height()), 20, 1e-13, &error);
  if (!std::isfinite(value)) throw QuadratureStall("Gauss-Kronrod produced a non-finite value");
  return value;
}

}  // namespace

NuDomain nu_domain(const SurfaceModel& s) {
  if (s.t0() == 0.0) return {s.m_at_0(), s.m_at_0()};
  return {s.inf_m() + kNuMargin, s.m_at_0() - kNuMargin};
}

double phi(const SurfaceModel& s, double nu, const QuadratureOptions& opt) {
  const Integrand f(s, nu);
  return tanh_sinh_route(f, [&](double tau) { return f.phi_density(tau); }, opt);
}

double ell(const SurfaceModel& s, double nu, const QuadratureOptions& opt) {
  const Integrand f(s, nu);
  return tanh_sinh_route(f, [&](double tau) { return f.ell_density(tau); }, opt);
}

double phi_gauss_kronrod(const SurfaceModel& s, double nu) {
  const Integrand f(s, nu);
  return gauss_kronrod_route(f, [&](double tau) { return f.phi_density(tau); });
}

double ell_gauss_kronrod(const SurfaceModel& s, double nu) {
  const Integrand f(s, nu);
  return gauss_kronrod_route(f, [&](double tau) { return f.ell_density(tau); });
}

double phi_upper_limit(const SurfaceModel& s) {
  const double g0 = gaussian_curvature(s, 0.0);
  if (!(g0 > 0.0)) return kInfinity;
  return pi / (s.m_at_0() * std::sqrt(g0));
}

double ell_upper_limit(const SurfaceModel& s) {
  const double g0 = gaussian_curvature(s, 0.0);
  if (!(g0 > 0.0)) return kInfinity;
  return pi / std::sqrt(g0);
}

HalfPeriodProfile build_profile(const SurfaceModel& s, int points, const QuadratureOptions& opt) {
  if (points < 1) throw OutOfRange("profile needs at least one point");
  const NuDomain d = nu_domain(s);
  std::vector<double> grid;
  if (!d.empty()) {
    grid.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) grid.push_back(d.lo + (d.hi - d.lo) * (k + 0.5) / points);
  }
  return build_profile(s, std::move(grid), opt);
}

HalfPeriodProfile build_profile(const SurfaceModel& s, std::vector<double> nu_grid, const QuadratureOptions& opt) {
  HalfPeriodProfile p;
  p.surface = &s;
  for (std::size_t k = 1; k < nu_grid.size(); ++k)
    if (!(nu_grid[k] > nu_grid[k - 1])) throw OutOfRange("nu grid must be strictly increasing");
  p.nu_grid = std::move(nu_grid);
  const std::size_t n = p.nu_grid.size();
  p.xi_values.resize(n);
  p.phi_values.resize(n);
  p.ell_values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Integrand f(s, p.nu_grid[k]);
    p.xi_values[k] = f.turning_height();
    p.phi_values[k] = tanh_sinh_route(f, [&](double tau) { return f.phi_density(tau); }, opt);
    p.ell_values[k] = tanh_sinh_route(f, [&](double tau) { return f.ell_density(tau); }, opt);
  }
  return p;
}

double nu_pi(const SurfaceModel& s, const HalfPeriodProfile& profile) {
  const NuDomain d = nu_domain(s);
  if (d.empty()) throw OutOfRange("the surface has an empty half-period domain (t0 = 0)");
  // φ(m(0)⁻) = π exactly happens (λ = 2); treat a rounding-level shortfall as equality
  if (phi_upper_limit(s) >= pi * (1.0 - 1e-12)) return s.m_at_0();

  // bracket: φ(lo) ≥ π > φ(hi)
  double lo = d.lo, hi = d.hi;
  for (std::size_t k = 0; k < profile.nu_grid.size(); ++k) {
    if (profile.phi_values[k] >= pi) {
      lo = profile.nu_grid[k];
    } else {
      hi = profile.nu_grid[k];
      break;
    }
  }
  if (phi(s, hi) >= pi) {
    // only the top margin is left; the limit there is below π
    lo = hi;
    hi = d.hi;
    if (phi(s, hi) >= pi) return s.m_at_0();
  }
  // φ < π throughout the sampled domain: the root lies at or below its lower edge
  if (lo == d.lo && phi(s, lo) < pi) return d.lo;

  for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (phi(s, mid) >= pi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double t_pi(const SurfaceModel& s, const HalfPeriodProfile& profile) {
  const HypothesisReport report = check_hypotheses(s, profile);
  if (!report.verdict) throw HypothesesNotVerified(report.summary());
  const double nu = nu_pi(s, profile);
  if (nu >= s.m_at_0()) return 0.0;
  return xi(s, nu);
}

}  // namespace cutloc
