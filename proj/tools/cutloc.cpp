// Command-line front end. Every command writes CSV or JSON to --out (or stdout).
// Exit codes: 0 success, 1 a check failed, 2 usage or domain error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cutloc/acceptance.hpp"
#include "cutloc/cutlocus.hpp"
#include "cutloc/errors.hpp"
#include "cutloc/geodesic.hpp"
#include "cutloc/halfperiod.hpp"
#include "cutloc/io.hpp"
#include "cutloc/oracle.hpp"
#include "cutloc/surface.hpp"

using namespace cutloc;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string surface = "tamura";
  std::string q;
  std::optional<double> nu_min, nu_max;
  int steps = 200;
  double tol = 1e-12;
  std::uint64_t seed = acceptance::AcceptanceOptions{}.seed;
  std::string out;
  bool audit = false;
  bool cover = false;
  std::optional<double> angle, nu;
  double length = 10.0;
  double t_max = 3.0;
  std::string format = "csv";
  bool timings = false;
};

// Values typed on the command line; each is applied only if its flag was given.
struct Flags {
  RunConfig v;
  std::string config;
  double nu_min = 0, nu_max = 0, angle = 0, nu = 0;
};

template <class T>
void merge(T& field, const CLI::App& app, const char* flag, const T& typed, const json& cfg, const char* key) {
  const CLI::Option* o = app.get_option_no_throw(flag);
  if (o && o->count() > 0) {
    field = typed;
  } else if (cfg.contains(key)) {
    field = cfg.at(key).get<T>();
  }
}

template <class T>
void merge(std::optional<T>& field, const CLI::App& app, const char* flag, const T& typed, const json& cfg,
           const char* key) {
  const CLI::Option* o = app.get_option_no_throw(flag);
  if (o && o->count() > 0) {
    field = typed;
  } else if (cfg.contains(key)) {
    field = cfg.at(key).get<T>();
  }
}

// flags > config file > defaults
RunConfig resolve(const CLI::App& app, const CLI::App& sub, const Flags& f) {
  json cfg = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw OutOfRange("cannot read config file " + f.config);
    cfg = json::parse(in);
    if (!cfg.is_object()) throw OutOfRange("config file must hold a JSON object");
  }
  RunConfig c;
  // a bare array is accepted for q
  if (cfg.contains("q") && cfg.at("q").is_array()) {
    cfg["q"] = std::to_string(cfg["q"][0].get<double>()) + "," + std::to_string(cfg["q"][1].get<double>());
  }
  merge(c.surface, app, "--surface", f.v.surface, cfg, "surface");
  merge(c.tol, app, "--tol", f.v.tol, cfg, "tol");
  merge(c.seed, app, "--seed", f.v.seed, cfg, "seed");
  merge(c.out, app, "--out", f.v.out, cfg, "out");
  merge(c.q, sub, "--q", f.v.q, cfg, "q");
  merge(c.nu_min, sub, "--nu-min", f.nu_min, cfg, "nu_min");
  merge(c.nu_max, sub, "--nu-max", f.nu_max, cfg, "nu_max");
  merge(c.steps, sub, "--steps", f.v.steps, cfg, "steps");
  merge(c.audit, sub, "--audit", f.v.audit, cfg, "audit");
  merge(c.cover, sub, "--cover", f.v.cover, cfg, "cover");
  merge(c.angle, sub, "--angle", f.angle, cfg, "angle");
  merge(c.nu, sub, "--nu", f.nu, cfg, "nu");
  merge(c.length, sub, "--length", f.v.length, cfg, "length");
  merge(c.t_max, sub, "--t-max", f.v.t_max, cfg, "t_max");
  merge(c.format, sub, "--format", f.v.format, cfg, "format");
  merge(c.timings, sub, "--timings", f.v.timings, cfg, "timings");
  return c;
}

SurfacePoint parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw OutOfRange("expected a point as t,theta, got '" + text + "'");
  try {
    const double t = std::stod(text.substr(0, comma));
    const double th = std::stod(text.substr(comma + 1));
    return {t, th};
  } catch (const std::logic_error&) {
    throw OutOfRange("expected a point as t,theta, got '" + text + "'");
  }
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out);
  if (!out) throw OutOfRange("cannot write " + c.out);
  out << text;
}

Tolerances ode_tol(const RunConfig& c) {
  Tolerances t;
  t.atol = c.tol;
  t.rtol = c.tol;
  return t;
}

QuadratureOptions quad_tol(const RunConfig& c) {
  QuadratureOptions q;
  q.abs_tol = 0.1 * c.tol;
  q.rel_tol = 0.1 * c.tol;
  return q;
}

int cmd_phi_table(const RunConfig& c) {
  const SurfaceModel s = build_surface(parse_surface_tag(c.surface));
  const NuDomain d = nu_domain(s);
  if (d.empty())
    throw HypothesesNotVerified("no half-period domain: G(0) = " + std::to_string(gaussian_curvature(s, 0.0)) +
                                (s.t0() == 0.0 ? ", m is not decreasing near 0 (t0 = 0)" : ""));
  HalfPeriodProfile p;
  if (c.nu_min || c.nu_max) {
    const double lo = c.nu_min.value_or(d.lo), hi = c.nu_max.value_or(d.hi);
    if (c.steps < 1) throw OutOfRange("--steps must be positive");
    std::vector<double> grid;
    for (int k = 0; k < c.steps; ++k) grid.push_back(c.steps == 1 ? lo : lo + (hi - lo) * k / (c.steps - 1));
    p = build_profile(s, grid, quad_tol(c));
  } else {
    p = build_profile(s, c.steps, quad_tol(c));
  }
  std::ostringstream os;
  io::write_phi_table_csv(os, s, p);
  emit(c, os.str());
  return kOk;
}

int cmd_cut_locus(const RunConfig& c) {
  const SurfaceModel s = build_surface(parse_surface_tag(c.surface));
  if (c.q.empty()) throw OutOfRange("cut-locus needs --q t,theta");
  const SurfacePoint q = parse_point(c.q);
  const HalfPeriodProfile p = build_profile(s, c.steps, quad_tol(c));
  const CutLocusShape shape = c.cover ? cover_cut_locus(s, q, p) : cut_locus(s, q, p);
  json j = {{"surface", s.descriptor()}, {"q", {{"t", q.t}, {"theta", q.theta}}}, {"cover", c.cover},
            {"cut_locus", shape}};
  int code = kOk;
  if (c.audit) {
    if (c.cover) throw OutOfRange("--audit checks the cylinder cut locus; drop --cover");
    oracle::OracleOptions oo;
    oo.ode = ode_tol(c);
    const oracle::VerificationReport rep = oracle::audit_cut_point(s, q, shape, oo);
    j["audit"] = rep;
    if (!rep.passed()) code = kCheckFailed;
  }
  emit(c, j.dump(2) + "\n");
  return code;
}

int cmd_trace(const RunConfig& c) {
  const SurfaceModel s = build_surface(parse_surface_tag(c.surface));
  const SurfacePoint start = parse_point(c.q.empty() ? "0,0" : c.q);
  if (c.angle && c.nu) throw OutOfRange("give --angle or --nu, not both");
  double angle = c.angle.value_or(0.0);
  if (c.nu) {
    const double m = s.m(start.t).value;
    if (!(std::abs(*c.nu) <= m)) throw OutOfRange("|nu| must not exceed m(t) = " + std::to_string(m) + " at the start");
    angle = std::asin(*c.nu / m);
  }
  const GeodesicTrace tr = shoot(s, start, angle, c.length, ode_tol(c));
  if (c.format == "json") {
    json j;
    io::to_json(j, tr);
    emit(c, j.dump(2) + "\n");
  } else if (c.format == "csv") {
    std::ostringstream os;
    io::write_trace_csv(os, tr);
    emit(c, os.str());
  } else {
    throw OutOfRange("--format must be csv or json");
  }
  return kOk;
}

int cmd_verify(const RunConfig& c) {
  acceptance::AcceptanceOptions o;
  o.tol = c.tol;
  o.seed = c.seed;
  std::vector<acceptance::CriterionResult> results;
  for (int id = 1; id <= 10; ++id) {
    results.push_back(acceptance::run_criterion(id, o));
    std::cerr << acceptance::format_line(results.back()) << "\n";
  }
  const json j = acceptance::report(results, o, c.timings);
  emit(c, j.dump(2) + "\n");
  return j.at("passed").get<bool>() ? kOk : kCheckFailed;
}

int cmd_check_hypotheses(const RunConfig& c) {
  const SurfaceModel s = build_surface(parse_surface_tag(c.surface));
  const HypothesisReport r = check_hypotheses(s, build_profile(s, c.steps, quad_tol(c)));
  emit(c, json{{"surface", s.descriptor()}, {"hypotheses", r}}.dump(2) + "\n");
  return r.verdict ? kOk : kCheckFailed;
}

int cmd_curvature_profile(const RunConfig& c) {
  const SurfaceModel s = build_surface(parse_surface_tag(c.surface));
  std::ostringstream os;
  io::write_curvature_csv(os, s, c.t_max, c.steps);
  emit(c, os.str());
  return kOk;
}

// failed checks and numerical breakdowns → 1; bad input → 2
int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HypothesesNotVerified*>(&e) || dynamic_cast<const StepFailure*>(&e) ||
      dynamic_cast<const QuadratureStall*>(&e) || dynamic_cast<const NoHit*>(&e) ||
      dynamic_cast<const NotFound*>(&e) || dynamic_cast<const NoReturn*>(&e))
    return kCheckFailed;
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut loci of cylinders of revolution: half-period tables, geodesics, cut loci and their audit."};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--surface", f.v.surface, "tamura | lambda:<l> | custom:<expr> (default tamura)");
  app.add_option("--tol", f.v.tol, "integrator tolerance; quadrature uses a tenth (default 1e-12)");
  app.add_option("--seed", f.v.seed, "seed for random sampling");
  app.add_option("--out", f.v.out, "output file (default stdout)");
  app.add_option("--config", f.config, "JSON config; flags override it");

  CLI::App* phi_table = app.add_subcommand("phi-table", "CSV of nu, xi, phi, ell (plus closed form on the lambda family)");
  phi_table->add_option("--nu-min", f.nu_min, "first nu of an evenly spaced grid");
  phi_table->add_option("--nu-max", f.nu_max, "last nu of an evenly spaced grid");
  phi_table->add_option("--steps", f.v.steps, "number of rows (default 200)");

  CLI::App* cut = app.add_subcommand("cut-locus", "JSON cut locus of q, optionally audited by geodesic shooting");
  cut->add_option("--q", f.v.q, "base point t,theta");
  cut->add_option("--steps", f.v.steps, "half-period grid size (default 200)");
  cut->add_flag("--audit", f.v.audit, "embed an oracle verification report");
  cut->add_flag("--cover", f.v.cover, "cut locus on the universal cover");

  CLI::App* trace = app.add_subcommand("trace", "geodesic samples as CSV (events in a footer) or JSON");
  trace->add_option("--q", f.v.q, "start point t,theta (default 0,0)");
  trace->add_option("--angle", f.angle, "direction from d/dt toward d/dtheta, in [-pi, pi]");
  trace->add_option("--nu", f.nu, "Clairaut constant instead of --angle");
  trace->add_option("--length", f.v.length, "arc length (default 10)");
  trace->add_option("--format", f.v.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* verify = app.add_subcommand("verify", "run the ten acceptance checks; JSON report");
  verify->add_flag("--timings", f.v.timings, "include runtimes in the report (not byte-stable)");

  CLI::App* hyp = app.add_subcommand("check-hypotheses", "JSON hypothesis report; exit 1 if the verdict is false");
  hyp->add_option("--steps", f.v.steps, "half-period grid size (default 200)");

  CLI::App* curv = app.add_subcommand("curvature-profile", "CSV of m, m', m'' and G on [0, t_max]");
  curv->add_option("--t-max", f.v.t_max, "upper end (default 3)");
  curv->add_option("--steps", f.v.steps, "number of cells (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      const RunConfig c = resolve(app, *sub, f);
      if (sub == phi_table) return cmd_phi_table(c);
      if (sub == cut) return cmd_cut_locus(c);
      if (sub == trace) return cmd_trace(c);
      if (sub == verify) return cmd_verify(c);
      if (sub == hyp) return cmd_check_hypotheses(c);
      if (sub == curv) return cmd_curvature_profile(c);
    }
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}
