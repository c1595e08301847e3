#pragma once

#include <iosfwd>
#include <optional>

#include "json.hpp"

#include "cutloc/geodesic.hpp"
#include "cutloc/halfperiod.hpp"
#include "cutloc/surface.hpp"

// Machine-readable outputs: CSV tables and JSON documents.
namespace cutloc::io {

/// Header comment lines carry nu, start and angle; the rows are
/// s,t,theta,vt,vtheta; a footer of "# event,<kind>,s,t,theta" lines
/// lists the events. Values are written with 17 significant digits.
void write_trace_csv(std::ostream& out, const GeodesicTrace& trace);

/// Inverse of write_trace_csv. Throws OutOfRange on malformed input.
GeodesicTrace read_trace_csv(std::istream& in);

/// nu,xi,phi,ell; for a λ-family surface also phi_closed,phi_error.
void write_phi_table_csv(std::ostream& out, const SurfaceModel& s, const HalfPeriodProfile& profile);

/// t,m,m_prime,m_second,curvature on `steps` equal cells of [0, t_max].
void write_curvature_csv(std::ostream& out, const SurfaceModel& s, double t_max, int steps);

const char* event_name(EventKind kind);

void to_json(nlohmann::json& j, const GeodesicTrace& trace);

}  // namespace cutloc::io
