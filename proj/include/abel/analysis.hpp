#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "abel/coeffs.hpp"
#include "abel/criteria.hpp"
#include "abel/lyapunov.hpp"
#include "abel/perturb.hpp"
#include "abel/poincare.hpp"

namespace abel {

enum class Command { Analyze, Orbits, Criterion, Lyapunov, Bifurcate, Perturb, Transform };

const char* to_string(Command c);
std::optional<Command> command_from_string(const std::string& s);

struct AnalysisRequest {
  Command command = Command::Analyze;
  std::optional<AbelEquation> equation;
  std::map<std::string, double> options;  // numeric options, echoed verbatim
  std::string family;                     // "trig" | "poly" for bifurcate
  std::optional<std::array<double, 3>> witness;  // --witness a,b[,c]
  int sweep = 0;
  std::uint64_t seed = 12345;
};

struct Report {
  nlohmann::ordered_json doc;
  bool inconsistent = false;  // criterion bound contradicted by the scan
  std::string csv_scan;        // (x0, displacement) rows
  std::string csv_trajectories;  // (orbit_index, t, x) rows
  std::string transformed_spec;  // emitted by the transform command
};

/// Dispatches one request. Throws std::invalid_argument on inconsistent
/// options and SpecParseError is propagated from equation parsing.
Report run(const AnalysisRequest& request);

/// Deterministic serialization: insertion-ordered keys, doubles at 17
/// significant digits, no timestamps.
std::string dump_deterministic(const nlohmann::ordered_json& j, int indent = 2);

/// Soundness sweep used by the `criterion --sweep` subcommand and the
/// acceptance suite: random family draws that satisfy a uniqueness
/// condition (and are not centers) must never produce more than one
/// non-zero orbit, hyperbolic when present.
struct SweepResult {
  int draws = 0;
  int applicable = 0;
  int orbits_found = 0;
  int violations = 0;
  std::vector<std::string> details;
};
SweepResult criterion_soundness_sweep(bool poly_family, int n_draws,
                                      std::uint64_t seed, int j = 1, int k = 2);

nlohmann::ordered_json equation_to_json(const AbelEquation& eq);
nlohmann::ordered_json criterion_report_to_json(const CriterionReport& r);

}  // namespace abel
