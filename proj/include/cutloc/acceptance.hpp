#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

// The ten acceptance checks, shared by the acceptance test binary and the
// `verify` subcommand.
namespace cutloc::acceptance {

struct AcceptanceOptions {
  /// Integrator atol/rtol; quadrature runs at a tenth of it.
  double tol = 1e-12;
  /// Seeds every random sample (pairs, shots).
  std::uint64_t seed = 20240607;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Worst measured deviation (or the measured quantity) and its bound.
  double measured = 0.0;
  double threshold = 0.0;
  /// Wall-clock time and its budget (0: none).
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_all(const AcceptanceOptions& opt = {});

/// "criterion 1 PASS ..." with measured, bound and runtime.
std::string format_line(const CriterionResult& r);

/// Deterministic for a fixed seed: runtimes only appear with `timings`.
nlohmann::json report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opt, bool timings);

}  // namespace cutloc::acceptance
