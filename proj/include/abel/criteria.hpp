#pragma once

#include <optional>
#include <string>
#include <vector>

#include "abel/coeffs.hpp"

namespace abel {

enum class WitnessKind {
  CombinationSearch,  // generic direction scan over a cos t + b sin t
  AOnly,              // A itself sign-definite
  BOnly,              // B itself sign-definite
  TrigCondA,
  TrigCondB,
  TrigCondMixed,
  PolyCond1,
  PolyCond2,
  PolyCond3,
  MatchedEndpoints,
  ZeroMeanC,
  CubicDulac,
  Separable,  // A proportional to B; handled by the separable analysis
};

const char* to_string(WitnessKind k);

/// Constants (a, b) making a*A + b*B sign-definite and not identically
/// zero; c participates only in the three-parameter criterion.
struct Witness {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  WitnessKind kind = WitnessKind::CombinationSearch;
};

struct RegionPrediction {
  enum class Kind { Above, BelowZero, BetweenZeroAndRatio, NoNonzeroOrbit } kind =
      Kind::NoNonzeroOrbit;
  double lower = 0.0;  // -inf encoded as -HUGE_VAL
  double upper = 0.0;  // +inf encoded as +HUGE_VAL
  bool guaranteed_exists = false;
  std::string description;

  bool contains(double x) const { return x > lower && x < upper; }
};

struct CriterionReport {
  std::string criterion;  // short machine-readable name
  bool applies = false;
  std::optional<Witness> witness;
  SignClass sign_evidence;
  int orbit_bound = -1;  // 0, 1 or 4; -1 when not applicable
  bool hyperbolic_guarantee = false;
  std::optional<RegionPrediction> location;
  std::string notes;
};

/// Time-independent Dulac data: polynomial f(x) and exponent w for
///   M_w(t,x) = f'(x) h(t,x) + w f(x) dh/dx(t,x).
struct DulacData {
  std::vector<double> f_coeffs;  // ascending powers of x
  double w = -1.0;
};

double mw_evaluate(const AbelEquation& eq, const DulacData& d, double t, double x);

/// Exact closed-form conditions for A, B degree-1 trig polynomials. The
/// mixed condition's witness solves the quadratic
///   q(m) = (b0 m - a0)^2 - (b1 m - a1)^2 - (b2 m - a2)^2 >= 0.
struct TrigConditions {
  bool cond_a = false;
  bool cond_b = false;
  bool cond_mixed = false;
  std::optional<Witness> witness;
  bool q_feasible = false;        // direct feasibility of q (plus the a=0 axis)
  bool disagreement = false;      // conditions and q-feasibility disagree
};
TrigConditions trig_uniqueness_conditions(double a0, double a1, double a2,
                                          double b0, double b1, double b2);

/// Exact ratio conditions for the three-monomial family; each holding
/// condition pins a two-term combination alpha + beta t^m whose sign
/// class is decided from its endpoints.
struct PolyConditions {
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  std::optional<Witness> witness;
};
PolyConditions poly_uniqueness_conditions(double a0, double a1, double a2,
                                          double b0, double b1, double b2,
                                          int j, int k);

/// Searches for (a,b) with a*A + b*B sign-definite. Exact feasibility for
/// the two closed-form families; otherwise a direction scan over
/// (cos theta, sin theta) with golden-section refinement of the margin.
/// Requires C identically zero. Absence of a witness is a valid outcome.
std::optional<Witness> witness_search(const AbelEquation& eq, int n_angles = 256);

/// Endpoint-matched three-monomial case a1 + a2 = b1 + b2 = 0 (so
/// A(0)=A(1), B(0)=B(1)): at most one non-zero orbit once the center is
/// excluded. Falls back to the separable analysis when every combination
/// degenerates.
CriterionReport matched_endpoints_criterion(double a0, double a1, double a2,
                                            double b0, double b1, double b2,
                                            int j, int k);

/// For zero-mean C: witness search on (A exp(int_0^t C), B); a witness
/// bounds the orbit count by one with hyperbolicity, via the change of
/// variables that removes the linear term.
CriterionReport zero_mean_c_criterion(
    const AbelEquation& eq,
    std::optional<std::pair<double, double>> witness_hint = std::nullopt);

/// Three-parameter criterion with the cubic Dulac function
/// f = b x^3 - a x^2 + c x: requires a*A + b*B sign-definite and
/// (bC - cA)^2 + (aA + bB)(cB + aC) strictly negative; bounds the
/// non-zero orbit count by four (no hyperbolicity claim).
CriterionReport cubic_dulac_criterion(const AbelEquation& eq, double a, double b,
                                      double c);

/// Predicted location of the unique non-zero orbit from the signs of
/// int A and int B, after normalizing to (aA+bB)/b >= 0, a/b > 0 via the
/// time-reversal and x-reflection symmetries. Requires witness.b != 0.
std::optional<RegionPrediction> predict_orbit_region(const AbelEquation& eq,
                                                     const Witness& w);

/// Strict no-orbit test for the degree-1 trig family:
/// (a0^2 > a1^2+a2^2 or b0^2 > b1^2+b2^2) and
/// (a2b0-a0b2)^2 + (a0b1-a1b0)^2 < (a2b1-a1b2)^2.
bool trig_no_orbit_test(double a0, double a1, double a2, double b0, double b1,
                        double b2);

/// Runs every criterion that can apply to the equation and returns the
/// reports (most informative first).
std::vector<CriterionReport> evaluate_criteria(const AbelEquation& eq);

}  // namespace abel
