#include "cutloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "cutloc/errors.hpp"
#include "cutloc/halfperiod.hpp"
#include "geodesic_engine.hpp"

namespace cutloc::oracle {

namespace {

using std::numbers::pi;

// A tangential (double-root) connection counts when the closest approach in
// θ is within this; the endpoint is then off by at most m·kTangentMiss.
constexpr double kTangentMiss = 1e-7;
// A refined transversal root must land this close or it was a spurious
// bracket across a change of crossing order.
constexpr double kRootMiss = 1e-8;
constexpr long kShotSteps = 400'000;
// Lengths closer than this cannot be told apart by the refined shots.
constexpr double kLengthResolution = 1e-8;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * pi);
  return a <= -pi ? a + 2.0 * pi : a;
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * pi)); }

struct Crossing {
  double theta;
  double s;
};

// Crossings of t = level along the geodesic leaving q at `angle`, stopping
// after `wanted` of them (0: all within the budget). An integration failure
// just ends the list.
//
// A geodesic that pokes just past the level crosses it twice inside one step
// and the sign test sees nothing. Turning points are tracked too: a turn on
// the far side of the level with no crossing since the previous turn means
// such a pair was stepped over. The pair is recovered from the symmetry of the
// geodesic about its turning point, by integrating forward with steps short
// against the excursion.
std::vector<Crossing> crossings(const SurfaceModel& s, SurfacePoint q, double angle, double level, double budget,
                                const Tolerances& tol, std::size_t wanted) {
  std::vector<Crossing> out;
  const std::vector<detail::EventFn<4>> events{{0, level}, {2, 0.0}};
  double side = detail::sign_of(q.t - level);
  bool crossed = false;
  auto enough = [&] { return wanted != 0 && out.size() >= wanted; };
  try {
    detail::integrate<4>(
        s, detail::initial_state<4>(s, q, wrap_angle(angle)), budget, tol, events, [](double, const auto&) {},
        [&](std::size_t index, double at, const detail::State<4>& y) {
          if (index == 0) {
            out.push_back({y[1], at});
            crossed = true;
            side = detail::sign_of(y[0] - level);
            return enough() ? detail::Flow::Stop : detail::Flow::Continue;
          }
          const double beyond = detail::sign_of(y[0] - level);
          bool recovered = false;
          if (!crossed && side != 0.0 && beyond == -side) {
            const Jet2 m = s.m(y[0]);
            const double accel = std::abs(m.value * m.d1 * y[3] * y[3]);
            const double half = std::sqrt(2.0 * std::abs(y[0] - level) / std::max(accel, 1e-300));
            Tolerances local = tol;
            local.max_step = std::max(half / 16.0, 1e-12);
            double after_s = -1.0, after_theta = 0.0;
            detail::integrate<4>(
                s, y, 4.0 * half + 1e-9, local, std::vector<detail::EventFn<4>>{{0, level}},
                [](double, const auto&) {},
                [&](std::size_t, double ds, const detail::State<4>& z) {
                  after_s = ds;
                  after_theta = z[1];
                  return detail::Flow::Stop;
                });
            if (after_s >= 0.0) {
              recovered = true;
              out.push_back({2.0 * y[1] - after_theta, at - after_s});
              if (enough()) return detail::Flow::Stop;
              out.push_back({after_theta, at + after_s});
              if (enough()) return detail::Flow::Stop;
            }
          }
          crossed = false;
          // back on the near side after a recovered pair
          if (beyond != 0.0) side = recovered ? -beyond : beyond;
          return detail::Flow::Continue;
        });
  } catch (const StepFailure&) {
  } catch (const EvaluationDomainError&) {
  }
  return out;
}

struct Hit {
  double angle;
  double length;
  int winding;
};

}  // namespace

struct ParallelFan::Impl {
  const SurfaceModel* surface;
  SurfacePoint q;
  double level;
  double budget;
  OracleOptions opt;
  Tolerances fine;
  std::vector<double> angles;
  std::vector<std::vector<Crossing>> fan;
  bool parallel_is_geodesic = false;

  // θ at the c-th crossing (1-based) along a refinement shot, with its length
  std::optional<Crossing> probe(double angle, std::size_t c) const {
    const auto xs = crossings(*surface, q, angle, level, budget, fine, c);
    if (xs.size() < c) return std::nullopt;
    return xs[c - 1];
  }

  // Illinois on g(a) = θ_c(a) − target over a sign-changing bracket
  std::optional<Hit> refine_root(double a0, double g0, double a1, double g1, std::size_t c, double target,
                                 int k) const {
    std::optional<Crossing> best;
    double best_a = a0;
    int side = 0;
    for (int it = 0; it < 80; ++it) {
      double a = (a0 * g1 - a1 * g0) / (g1 - g0);
      if (!(a > std::min(a0, a1) && a < std::max(a0, a1))) a = 0.5 * (a0 + a1);
      const auto x = probe(a, c);
      if (!x) return std::nullopt;
      const double g = x->theta - target;
      best = x;
      best_a = a;
      if (std::abs(g) <= 1e-13 * std::max(1.0, std::abs(target)) || std::abs(a1 - a0) <= 1e-15) break;
      if ((g > 0) == (g1 > 0)) {
        a1 = a;
        g1 = g;
        if (side == -1) g0 *= 0.5;
        side = -1;
      } else {
        a0 = a;
        g0 = g;
        if (side == 1) g1 *= 0.5;
        side = 1;
      }
    }
    if (!best || std::abs(best->theta - target) > kRootMiss) return std::nullopt;
    return Hit{wrap_angle(best_a), best->s, k};
  }

  // Between fan rays a_lo < a_mid < a_hi where |g| dips without changing sign:
  // golden-section toward zero, then either split into two roots or accept a tangency.
  void refine_dip(double a_lo, double a_hi, double sign, std::size_t c, double target, int k,
                  std::vector<Hit>& hits) const {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    auto h = [&](double a) -> std::optional<std::pair<double, double>> {
      const auto x = probe(a, c);
      if (!x) return std::nullopt;
      return std::pair{sign * (x->theta - target), x->s};
    };
    double lo = a_lo, hi = a_hi;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    auto f1 = h(x1), f2 = h(x2);
    if (!f1 || !f2) return;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      for (const auto& [x, f] : {std::pair{x1, *f1}, std::pair{x2, *f2}}) {
        if (f.first < 0.0) {
          // crossed zero: one root on each side of x
          const auto left = h(a_lo), right = h(a_hi);
          if (left && right) {
            if (auto r1 = refine_root(a_lo, sign * left->first, x, sign * f.first, c, target, k)) hits.push_back(*r1);
            if (auto r2 = refine_root(x, sign * f.first, a_hi, sign * right->first, c, target, k))
              hits.push_back(*r2);
          }
          return;
        }
      }
      if (f1->first < f2->first) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = h(x1);
        if (!f1) return;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = h(x2);
        if (!f2) return;
      }
    }
    const auto& f = f1->first < f2->first ? *f1 : *f2;
    const double a = f1->first < f2->first ? x1 : x2;
    if (f.first <= kTangentMiss) hits.push_back({wrap_angle(a), f.second, k});
  }
};

ParallelFan::ParallelFan(const SurfaceModel& s, SurfacePoint q, double level, double budget, OracleOptions opt)
    : impl_(std::make_unique<Impl>()) {
  if (opt.fan_size < 64) throw OutOfRange("fan_size must be at least 64");
  if (opt.max_winding < 0) throw OutOfRange("max_winding must be non-negative");
  if (!(budget > 0.0) || !std::isfinite(budget)) throw OutOfRange("length budget must be positive and finite");
  Impl& d = *impl_;
  d.surface = &s;
  d.q = q;
  d.level = level;
  d.budget = budget;
  d.opt = opt;
  d.fine = opt.ode;
  d.fine.max_steps = std::min(d.fine.max_steps, kShotSteps);
  Tolerances coarse = d.fine;
  coarse.atol *= 100.0;
  coarse.rtol *= 100.0;
  coarse.event_tol *= 100.0;

  const int n = opt.fan_size;
  d.angles.resize(static_cast<std::size_t>(n));
  d.fan.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    // symmetric about 0 and π, neither of which is a ray
    d.angles[j] = -pi + 2.0 * pi * (j + 0.5) / n;
    d.fan[j] = crossings(s, q, d.angles[j], level, budget, coarse, 0);
  }
  const Jet2 m = s.m(level);
  d.parallel_is_geodesic = std::abs(q.t - level) <= 1e-12 && std::abs(m.d1) <= 1e-12 * m.value;
}

ParallelFan::~ParallelFan() = default;
ParallelFan::ParallelFan(ParallelFan&&) noexcept = default;
ParallelFan& ParallelFan::operator=(ParallelFan&&) noexcept = default;

double ParallelFan::level() const { return impl_->level; }
double ParallelFan::length_budget() const { return impl_->budget; }

namespace {

// Candidate root region between fan rays, with a lower bound on the length
// of any connection it can produce.
struct Task {
  double lower;
  bool dip;
  int j;
  std::size_t c;
  int k;
  double g0, g1;
};

FanSearchResult summarize(std::vector<Hit> hits, const OracleOptions& opt) {
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.length < b.length; });
  FanSearchResult r;
  for (int k = -opt.max_winding; k <= opt.max_winding; ++k) r.per_lift[k] = kInfinity;
  for (const Hit& h : hits) {
    r.per_lift[h.winding] = std::min(r.per_lift[h.winding], h.length);
    const bool seen = std::any_of(r.connections.begin(), r.connections.end(), [&](const Connection& c) {
      return angle_gap(c.angle, h.angle) < opt.angle_separation;
    });
    if (!seen) r.connections.push_back({h.angle, h.length, h.winding});
  }
  if (r.connections.empty()) return r;
  r.best_length = r.connections.front().length;
  for (const Connection& c : r.connections) {
    if (c.length <= r.best_length + opt.tie_tol) {
      r.best_angles.push_back(c.angle);
    } else {
      r.second_length = c.length;
      break;
    }
  }
  return r;
}

}  // namespace

FanSearchResult ParallelFan::search(double theta) const {
  const Impl& d = *impl_;
  const int n = static_cast<int>(d.angles.size());
  const int w = d.opt.max_winding;
  std::vector<Hit> hits;
  std::vector<Task> tasks;

  auto at = [&](int j) -> const std::vector<Crossing>& { return d.fan[static_cast<std::size_t>((j % n + n) % n)]; };
  // angle of ray j, continued past the wrap
  auto ray = [&](int j) { return d.angles[static_cast<std::size_t>((j % n + n) % n)] + 2.0 * pi * std::floor(double(j) / n); };
  // arc length to a crossing moves smoothly along a branch; allow twice the
  // variation seen across the bracket
  auto lower = [](std::initializer_list<double> s) {
    const auto [lo, hi] = std::minmax(s);
    return lo - 2.0 * (hi - lo) - 1e-6;
  };
  std::size_t max_c = 0;
  for (const auto& xs : d.fan) max_c = std::max(max_c, xs.size());

  for (int k = -w; k <= w; ++k) {
    const double target = theta + 2.0 * pi * k;
    const double dtheta = target - d.q.theta;
    if (dtheta == 0.0 && d.q.t == d.level) {
      hits.push_back({0.0, 0.0, k});
    } else if (d.parallel_is_geodesic) {
      const double len = d.surface->m(d.level).value * std::abs(dtheta);
      if (len <= d.budget) hits.push_back({dtheta > 0 ? pi / 2 : -pi / 2, len, k});
    }

    for (std::size_t c = 1; c <= max_c; ++c) {
      for (int j = 0; j < n; ++j) {
        const auto &x0 = at(j), &x1 = at(j + 1), &xm = at(j - 1);
        if (x0.size() < c || x1.size() < c) continue;
        const double g0 = x0[c - 1].theta - target, g1 = x1[c - 1].theta - target;
        if (g0 == 0.0) {
          hits.push_back({d.angles[j], x0[c - 1].s, k});
          continue;
        }
        if ((g0 > 0) != (g1 > 0) && g1 != 0.0) {
          tasks.push_back({lower({x0[c - 1].s, x1[c - 1].s}), false, j, c, k, g0, g1});
          continue;
        }
        if (xm.size() < c) continue;
        const double gm = xm[c - 1].theta - target;
        if ((gm > 0) != (g0 > 0)) continue;
        if (std::abs(g0) > std::abs(gm) || std::abs(g0) > std::abs(g1)) continue;
        if (std::abs(g0) > 4.0 * std::max(std::abs(gm - g0), std::abs(g1 - g0))) continue;
        tasks.push_back({lower({xm[c - 1].s, x0[c - 1].s, x1[c - 1].s}), true, j, c, k, g0, g1});
      }
    }
  }

  // Cheapest candidates first. Unless exhaustive, stop once no remaining
  // candidate can undercut the second distinct connection.
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.lower < b.lower; });
  double cutoff = summarize(hits, d.opt).second_length;
  for (const Task& t : tasks) {
    if (!d.opt.exhaustive && t.lower > cutoff) break;
    const double target = theta + 2.0 * pi * t.k;
    const std::size_t before = hits.size();
    if (t.dip) {
      d.refine_dip(ray(t.j - 1), ray(t.j + 1), t.g0 > 0 ? 1.0 : -1.0, t.c, target, t.k, hits);
    } else if (auto h = d.refine_root(ray(t.j), t.g0, ray(t.j + 1), t.g1, t.c, target, t.k)) {
      hits.push_back(*h);
    }
    if (hits.size() != before) cutoff = summarize(hits, d.opt).second_length;
  }
  if (hits.empty()) throw NoHit("no geodesic from the fan reaches the target within the length budget");

  FanSearchResult r = summarize(std::move(hits), d.opt);
  r.target = {d.level, theta};
  return r;
}

double length_budget(const SurfaceModel& s, SurfacePoint q, SurfacePoint x, int max_winding) {
  return 4.0 * (std::abs(x.t - q.t) + s.m_at_0() * (std::abs(x.theta - q.theta) + 2.0 * pi * max_winding));
}

FanSearchResult distance(const SurfaceModel& s, SurfacePoint q, SurfacePoint x, const OracleOptions& opt) {
  double budget = length_budget(s, q, x, opt.max_winding);
  if (budget == 0.0) budget = 1.0;
  return ParallelFan(s, q, x.t, budget, opt).search(x.theta);
}

bool VerificationReport::passed() const {
  return !findings.empty() &&
         std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.passed; });
}

namespace {

Finding from_search(std::string check, const FanSearchResult& r) {
  Finding f;
  f.check = std::move(check);
  f.point = r.target;
  f.minimizers = r.minimizers();
  f.best_length = r.best_length;
  f.second_length = r.second_length;
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Directions whose length is within the numerical resolution of the best.
// Near the end of the arc a third geodesic, past its conjugate point, comes
// within O(ε^{3/2}) of the minimizing pair; it is longer, but by less than
// tie_tol, so the count uses the resolution rather than tie_tol.
int sharp_minimizers(const FanSearchResult& r) {
  return static_cast<int>(std::count_if(r.connections.begin(), r.connections.end(), [&](const Connection& c) {
    return c.length <= r.best_length + kLengthResolution;
  }));
}

Finding expect_tie(std::string check, const FanSearchResult& r, int expected, double tie_tol) {
  Finding f = from_search(std::move(check), r);
  f.minimizers = sharp_minimizers(r);
  const double spread = r.connections.size() >= static_cast<std::size_t>(expected)
                            ? r.connections[static_cast<std::size_t>(expected) - 1].length - r.best_length
                            : kInfinity;
  f.passed = f.minimizers == expected && spread <= tie_tol;
  f.detail = std::to_string(f.minimizers) + " minimizer(s), expected " + std::to_string(expected) + ", spread " +
             fmt(spread);
  return f;
}

Finding expect_unique(std::string check, const FanSearchResult& r, double tie_tol) {
  Finding f = from_search(std::move(check), r);
  f.passed = f.minimizers == 1 && r.tie_margin() > tie_tol;
  f.detail = "margin to the next direction " + fmt(r.tie_margin());
  return f;
}

}  // namespace

VerificationReport audit_cut_point(const SurfaceModel& s, SurfacePoint q, const CutLocusShape& predicted,
                                   const OracleOptions& opt) {
  VerificationReport rep;
  const double level = -q.t;
  const double budget = length_budget(s, q, {level, q.theta + 2.0 * pi}, opt.max_winding);

  if (predicted.variant == CutLocusVariant::MeridianPlusParallel && predicted.theta_interval &&
      predicted.first_cut_distance) {
    const ParallelFan fan(s, q, level, budget, opt);
    const double lo = (*predicted.theta_interval)[0];
    const double phi_u = lo - (q.theta - 2.0 * pi * std::floor(q.theta / (2.0 * pi)));
    const double start = q.theta + phi_u;  // first cut point, in q's sheet

    // no connection beats the predicted distance at the predicted point
    FanSearchResult at = fan.search(start);
    Finding f = from_search("first cut point distance", at);
    f.expected = *predicted.first_cut_distance;
    f.passed = std::abs(at.best_length - f.expected) <= opt.tie_tol && at.best_length >= f.expected - 1e-4;
    f.detail = "found " + fmt(at.best_length) + ", predicted " + fmt(f.expected);
    rep.findings.push_back(f);

    rep.findings.push_back(expect_tie("two minimizers just past the first cut point", fan.search(start + kArcOffset), 2, opt.tie_tol));
    rep.findings.push_back(expect_tie("two minimizers inside the arc", fan.search(0.5 * (start + q.theta + pi)), 2, opt.tie_tol));
    // the α/β pair and its mirror image
    rep.findings.push_back(expect_tie("four minimizers at the opposite meridian", fan.search(q.theta + pi), 4, opt.tie_tol));
    rep.findings.push_back(expect_unique("unique minimizer before the arc", fan.search(q.theta + 0.5 * phi_u),
                                         opt.tie_tol));
    rep.findings.push_back(expect_unique("unique minimizer just before the first cut point",
                                         fan.search(start - 10.0 * kArcOffset), opt.tie_tol));
  } else if (predicted.variant == CutLocusVariant::MeridianOnly) {
    const ParallelFan fan(s, q, level, budget, opt);
    rep.findings.push_back(expect_tie("two minimizers at the opposite meridian", fan.search(q.theta + pi), 2, opt.tie_tol));
    rep.findings.push_back(expect_unique("unique minimizer off the meridian", fan.search(q.theta + 0.5 * pi),
                                         opt.tie_tol));
    rep.findings.push_back(expect_unique("unique minimizer close to the meridian", fan.search(q.theta + 0.9 * pi),
                                         opt.tie_tol));
    if (q.t != 0.0) {
      const ParallelFan own(s, q, q.t, budget, opt);
      rep.findings.push_back(expect_tie("two minimizers at the opposite point of q's parallel", own.search(q.theta + pi), 2, opt.tie_tol));
    }
  } else {
    Finding f;
    f.check = "prediction";
    f.point = q;
    f.passed = false;
    f.detail = std::string("nothing to audit for variant ") + variant_name(predicted.variant);
    rep.findings.push_back(f);
  }
  return rep;
}

double scan_parallel_for_cut(const SurfaceModel& s, SurfacePoint q, int resolution, const OracleOptions& opt) {
  if (resolution < 2) throw OutOfRange("resolution must be at least 2");
  const double level = -q.t;
  const ParallelFan fan(s, q, level, length_budget(s, q, {level, q.theta + 2.0 * pi}, opt.max_winding), opt);
  auto ties = [&](double off) {
    try {
      return fan.search(q.theta + off).minimizers() >= 2;
    } catch (const NoHit&) {
      return false;
    }
  };
  double before = 0.0;
  for (int i = 1; i <= resolution; ++i) {
    const double off = pi * i / (resolution + 1);
    if (ties(off)) {
      double lo = before, hi = off;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (ties(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    before = off;
  }
  throw NotFound("no tie on the parallel t=" + fmt(level) + " for theta offsets in (0, pi)");
}

void to_json(nlohmann::json& j, const Finding& f) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j = {{"check", f.check},   {"t", f.point.t},
       {"theta", f.point.theta}, {"passed", f.passed},
       {"minimizers", f.minimizers}, {"best_length", num(f.best_length)},
       {"second_length", num(f.second_length)}, {"expected", num(f.expected)},
       {"detail", f.detail}};
}

void to_json(nlohmann::json& j, const VerificationReport& r) {
  j = {{"passed", r.passed()}, {"findings", r.findings}};
}

void to_json(nlohmann::json& j, const FanSearchResult& r) {
  nlohmann::json lifts = nlohmann::json::object();
  for (const auto& [k, v] : r.per_lift) lifts[std::to_string(k)] = std::isfinite(v) ? nlohmann::json(v) : nullptr;
  j = {{"target", {{"t", r.target.t}, {"theta", r.target.theta}}},
       {"best_length", r.best_length},
       {"best_angles", r.best_angles},
       {"per_lift", lifts},
       {"second_length", std::isfinite(r.second_length) ? nlohmann::json(r.second_length) : nullptr}};
}

}  // namespace cutloc::oracle
