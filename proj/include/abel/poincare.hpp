#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abel/coeffs.hpp"
#include "abel/integrate.hpp"
#include "abel/lyapunov.hpp"

namespace abel {

/// Orbits with |multiplier - 1| at or below this margin are reported
/// indeterminate rather than silently classified.
inline constexpr double kHyperbolicityTol = 1e-6;

enum class Stability {
  AttractingHyperbolic,
  RepellingHyperbolic,
  NonHyperbolic,
  ZeroSolution,
};

const char* to_string(Stability s);

struct OrbitRecord {
  double x0 = 0.0;
  Trajectory trajectory;
  double multiplier = 1.0;  // derivative of the t=0 -> t=1 map at x0
  Stability stability = Stability::ZeroSolution;
  double residual = 0.0;  // |x(1) - x0|
};

struct ScanConfig {
  double x_min = -50.0;
  double x_max = 50.0;
  int n_points = 2001;
  double residual_tol = 1e-9;
  double refine_tol = 1e-12;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  // Half of the budget goes to a logarithmically densified cluster near
  // x = 0, where the multiplicity >= 2 zero solution flattens the
  // displacement map.
  bool log_densify = true;
};

struct CenterBand {
  double x_lo = 0.0;
  double x_hi = 0.0;
};

struct ScanResult {
  std::vector<OrbitRecord> orbits;  // sorted by x0; contains the x0 = 0 record
  std::vector<CenterBand> center_bands;
  int escaped_nodes = 0;
  int completed_nodes = 0;
  std::vector<std::string> warnings;
  // Raw displacement data (x0, x(1) - x0) for completed nodes.
  std::vector<std::pair<double, double>> displacement;

  int nonzero_orbit_count() const {
    int n = 0;
    for (const auto& o : orbits)
      if (o.stability != Stability::ZeroSolution) ++n;
    return n;
  }
};

/// The t=0 -> t=1 map; nullopt when the solution escapes or the stepper
/// fails before t = 1.
std::optional<double> poincare_map(const AbelEquation& eq, double x0,
                                   double rel_tol = 1e-10,
                                   double abs_tol = 1e-10);

/// Root scan of the displacement x(1;x0) - x0. Sign changes between
/// completed neighbour nodes are refined by bisection; escaping nodes
/// break brackets. Runs of residual-level displacement are reported as
/// center bands instead of root lists.
ScanResult find_periodic_orbits(const AbelEquation& eq, const ScanConfig& cfg);

/// Multiplier recomputed from the divergence integral
/// exp(int_0^1 3A x^2 + 2B x + C dt) along the stored trajectory samples;
/// independent check of the variational value.
double multiplier_by_formula(const AbelEquation& eq, const OrbitRecord& orbit);

/// Positive scalar weight g(t,x) for the weighted divergence identity:
/// either |f(x)|^(1/w) for a polynomial f, or a strictly positive
/// function of t alone.
struct WeightFunction {
  enum class Kind { SeparablePower, TimeOnly } kind = Kind::TimeOnly;
  std::vector<double> f_coeffs;  // ascending powers of x
  double w = -1.0;
  CoefficientFunction p = CoefficientFunction::constant(1.0);

  static WeightFunction unit() { return WeightFunction{}; }
  static WeightFunction time_only(CoefficientFunction p);
  static WeightFunction separable_power(std::vector<double> f_coeffs, double w);
};

struct WeightedDivergence {
  double lhs = 0.0;  // log of the variational multiplier
  double rhs = 0.0;  // boundary terms + weighted divergence integral
};

/// Checks  log Pi'(x0) = log|g(0,x(0))| - log|g(1,x(1))|
///                      + int_0^1 div(|g| (1,h)) / |g| dt
/// along a completed periodic orbit. Throws std::domain_error when g
/// vanishes on the trajectory.
WeightedDivergence weighted_divergence_check(const AbelEquation& eq,
                                             const OrbitRecord& orbit,
                                             const WeightFunction& g);

enum class ZeroKind { CenterBand, SemiStable, OrdinaryMultiplicity };

struct ZeroClassification {
  ZeroKind kind = ZeroKind::OrdinaryMultiplicity;
  int multiplicity = 2;          // 2, 3 or 4; >= 5 means "4 or higher"
  bool multiplicity_is_lower_bound = false;
  int semistable_sign = 0;       // +1: positive side repelled, -1: mirrored
  LyapunovConstants constants;
  bool family_exact = false;     // center verdict is an iff for this family
  std::vector<std::pair<double, double>> probes;  // (x0, displacement)
  std::string notes;
};

/// Combines the Lyapunov constants with displacement probes near x = 0.
/// Requires C identically zero (the multiplicity ladder assumes it).
ZeroClassification classify_zero(const AbelEquation& eq, double probe_radius,
                                 double rel_tol = 1e-10, double abs_tol = 1e-10);

}  // namespace abel
