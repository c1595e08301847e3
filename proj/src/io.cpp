#include "cutloc/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cutloc/errors.hpp"
#include "cutloc/lambda_family.hpp"

namespace cutloc::io {

namespace {

// 17 significant digits read back to the same double
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  return out;
}

double parse(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw OutOfRange("trailing characters in number '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw OutOfRange("not a number: '" + text + "'");
  }
}

}  // namespace

const char* event_name(EventKind kind) {
  return kind == EventKind::TurningPoint ? "turning_point" : "equator_crossing";
}

void write_trace_csv(std::ostream& out, const GeodesicTrace& trace) {
  out << "# nu=" << num(trace.nu) << "\n";
  out << "# start=" << num(trace.start.t) << "," << num(trace.start.theta) << "\n";
  out << "# angle=" << num(trace.direction_angle) << "\n";
  out << "s,t,theta,vt,vtheta\n";
  for (const TraceSample& p : trace.samples)
    out << num(p.s) << "," << num(p.t) << "," << num(p.theta) << "," << num(p.vt) << "," << num(p.vtheta) << "\n";
  for (const TraceEvent& e : trace.events)
    out << "# event," << event_name(e.kind) << "," << num(e.s) << "," << num(e.point.t) << ","
        << num(e.point.theta) << "\n";
}

GeodesicTrace read_trace_csv(std::istream& in) {
  GeodesicTrace trace;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# event,", 0) == 0) {
      const auto cells = split(line.substr(8), ',');
      if (cells.size() != 4) throw OutOfRange("malformed event line: " + line);
      TraceEvent e;
      if (cells[0] == "turning_point") {
        e.kind = EventKind::TurningPoint;
      } else if (cells[0] == "equator_crossing") {
        e.kind = EventKind::EquatorCrossing;
      } else {
        throw OutOfRange("unknown event kind '" + cells[0] + "'");
      }
      e.s = parse(cells[1]);
      e.point = {parse(cells[2]), parse(cells[3])};
      trace.events.push_back(e);
    } else if (line.rfind("# nu=", 0) == 0) {
      trace.nu = parse(line.substr(5));
    } else if (line.rfind("# start=", 0) == 0) {
      const auto cells = split(line.substr(8), ',');
      if (cells.size() != 2) throw OutOfRange("malformed start line: " + line);
      trace.start = {parse(cells[0]), parse(cells[1])};
    } else if (line.rfind("# angle=", 0) == 0) {
      trace.direction_angle = parse(line.substr(8));
    } else if (line[0] == '#') {
      continue;
    } else if (!header) {
      if (line != "s,t,theta,vt,vtheta") throw OutOfRange("unexpected trace header: " + line);
      header = true;
    } else {
      const auto cells = split(line, ',');
      if (cells.size() != 5) throw OutOfRange("malformed trace row: " + line);
      trace.samples.push_back({parse(cells[0]), parse(cells[1]), parse(cells[2]), parse(cells[3]), parse(cells[4])});
    }
  }
  if (!header) throw OutOfRange("no trace header found");
  return trace;
}

void write_phi_table_csv(std::ostream& out, const SurfaceModel& s, const HalfPeriodProfile& profile) {
  const bool closed = s.descriptor().kind == SurfaceKind::Lambda;
  std::optional<lambda::LambdaParams> params;
  if (closed) params.emplace(s.descriptor().lambda);
  out << "nu,xi,phi,ell" << (closed ? ",phi_closed,phi_error" : "") << "\n";
  for (std::size_t k = 0; k < profile.nu_grid.size(); ++k) {
    out << num(profile.nu_grid[k]) << "," << num(profile.xi_values[k]) << "," << num(profile.phi_values[k]) << ","
        << num(profile.ell_values[k]);
    if (closed) {
      const double c = lambda::phi_closed(*params, profile.nu_grid[k]);
      out << "," << num(c) << "," << num(profile.phi_values[k] - c);
    }
    out << "\n";
  }
}

void write_curvature_csv(std::ostream& out, const SurfaceModel& s, double t_max, int steps) {
  if (steps < 1) throw OutOfRange("curvature profile needs at least one step");
  if (!(t_max > 0.0)) throw OutOfRange("curvature profile needs t_max > 0");
  out << "t,m,m_prime,m_second,curvature\n";
  for (int k = 0; k <= steps; ++k) {
    const double t = t_max * k / steps;
    const Jet2 m = s.m(t);
    out << num(t) << "," << num(m.value) << "," << num(m.d1) << "," << num(m.d2) << ","
        << num(gaussian_curvature(s, t)) << "\n";
  }
}

void to_json(nlohmann::json& j, const GeodesicTrace& trace) {
  nlohmann::json samples = nlohmann::json::array();
  for (const TraceSample& p : trace.samples) samples.push_back({p.s, p.t, p.theta, p.vt, p.vtheta});
  nlohmann::json events = nlohmann::json::array();
  for (const TraceEvent& e : trace.events)
    events.push_back({{"kind", event_name(e.kind)}, {"s", e.s}, {"t", e.point.t}, {"theta", e.point.theta}});
  j = {{"nu", trace.nu},
       {"start", {{"t", trace.start.t}, {"theta", trace.start.theta}}},
       {"direction_angle", trace.direction_angle},
       {"columns", {"s", "t", "theta", "vt", "vtheta"}},
       {"samples", samples},
       {"events", events}};
}

}  // namespace cutloc::io
