#pragma once

#include <cmath>

#include "abel/coeffs.hpp"

namespace abel {

enum class LyapunovMethod { ClosedFormTrig1, ClosedFormPoly3, Quadrature };
enum class CenterVerdict { Center, NotCenter, Undecidable };

/// Sequential obstructions to x = 0 being a center (C must vanish):
///   V2 = int_0^1 B,  V3 = int_0^1 A,  V4 = int_0^1 A(t) (int_0^t B) dt.
/// V3 is meaningful only when V2 ~ 0, and V4 only when V2 ~ V3 ~ 0.
struct LyapunovConstants {
  double v2 = 0.0;
  double v3 = 0.0;
  double v4 = 0.0;
  LyapunovMethod method = LyapunovMethod::Quadrature;
  CenterVerdict center_verdict = CenterVerdict::Undecidable;

  double zero_tol = 1e-12;  // scaled tolerance used for the verdict
  bool v2_zero() const { return std::abs(v2) <= zero_tol; }
  bool v3_zero() const { return std::abs(v3) <= zero_tol; }
  bool v4_zero() const { return std::abs(v4) <= zero_tol; }
};

/// Computes the constants; closed forms for the degree-1 trig family and
/// the three-monomial family, nested quadrature (tol 1e-12, as a single
/// augmented ODE) otherwise. Throws std::invalid_argument when C is not
/// identically zero.
LyapunovConstants lyapunov_constants(const AbelEquation& eq);

/// Same integrals evaluated by the augmented-ODE quadrature regardless of
/// family; serves as the independent cross-check of the closed forms.
LyapunovConstants lyapunov_constants_quadrature(const AbelEquation& eq);

/// Center conditions for the two closed-form families.
bool center_test_trig1(double a0, double a1, double a2, double b0, double b1,
                       double b2);
bool center_test_poly3(double a0, double a1, double a2, double b0, double b1,
                       double b2, int j, int k);

/// Degenerate-Hopf two-orbit designers. The returned equation has
/// V2 = +lambda, V3 = -mu and V4 = v4_target; two small periodic orbits
/// bifurcate from x = 0 when additionally 4*lambda*v4_target < mu^2
/// (see predict_bifurcation_roots). Preconditions enforced:
/// lambda <= mu/100 and mu <= v4_target/100, or mu = lambda = 0.
AbelEquation design_two_orbit_trig(double v4_target, double mu, double lambda);
AbelEquation design_two_orbit_poly(int j, int k, double v4_scale, double mu,
                                   double lambda);

/// Quartic-model prediction for the designed equations: the bifurcated
/// initial conditions are the roots of lambda - mu x + v4 x^2.
struct BifurcationPrediction {
  bool orbits_exist = false;
  double x_inner = 0.0, x_outer = 0.0;       // predicted initial conditions
  double gap_inner = 0.0, gap_outer = 0.0;   // predicted |multiplier - 1|
};
BifurcationPrediction predict_bifurcation_roots(double v4, double mu,
                                                double lambda);

}  // namespace abel
