#pragma once

#include <string>
#include <vector>

#include "abel/coeffs.hpp"
#include "abel/poincare.hpp"

namespace abel {

/// Perturbation of the cosine-coefficient center
///   dx/dt = 2 pi b1~ cos(2 pi t) x^2
///           + eps [ (a0~ + a1~ cos(2 pi t) + a2~ sin(2 pi t)) x^3 + b0~ x^2 ].
/// The unperturbed center solutions exist for |b1~ rho| < 1.
struct PerturbationParams {
  double b1_tilde = 1.0;  // must be non-zero
  double a0_tilde = 0.0;
  double a1_tilde = 0.0;
  double a2_tilde = 0.0;
  double b0_tilde = 0.0;
  double epsilon = 0.0;
};

/// Unperturbed solution x0(t; rho) = rho / (1 - rho b1~ sin(2 pi t)).
double center_solution(const PerturbationParams& p, double rho, double t);

/// First-order bifurcation function W^(rho) = W(rho)/rho^2, by adaptive
/// quadrature (tol 1e-11) of
///   b0~ + rho (a0~ + a1~ cos + a2~ sin) / (1 - b1~ rho sin).
double w_hat_quadrature(const PerturbationParams& p, double rho);

/// Closed form of the same function under b1~ rho = sin(y):
///   (a0~ sin y + (b0~ b1~ - a2~) cos y + a2~) / (b1~ cos y).
/// Kept separate from the quadrature so the two can be reconciled.
double w_hat_closed_form(const PerturbationParams& p, double rho);

/// Max |quadrature - closed form| over a uniform rho grid in the band.
double w_hat_max_discrepancy(const PerturbationParams& p, int n_grid = 257);

struct BifurcationRoot {
  double rho = 0.0;
  bool simple = false;
  double w_hat_slope = 0.0;
};

struct BifurcationRoots {
  std::vector<BifurcationRoot> roots;
  bool degenerate = false;  // W^ vanishes identically on the band
};

/// Zeros of the quadrature W^ on the open band, excluding rho = 0. At
/// most two simple zeros are expected.
BifurcationRoots predict_bifurcating_orbits(const PerturbationParams& p);

/// The full perturbed equation at the stored epsilon, as a degree-1 trig
/// pair.
AbelEquation perturbed_equation(const PerturbationParams& p);

struct ValidationRow {
  double rho_predicted = 0.0;
  bool matched = false;
  double x0_found = 0.0;
  double gap = 0.0;        // |x0_found - rho_predicted| at eps
  double x0_found_half = 0.0;
  double gap_half = 0.0;   // same at eps/2
  double multiplier = 1.0;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::vector<double> unmatched_orbits;  // found but near no predicted root
  int orbit_count = 0;                   // non-zero orbits inside the band at eps
};

/// Integrates the perturbed equation at eps and eps/2 and matches the
/// non-zero orbits found inside the band against the predicted roots.
/// Requires 0 < eps <= 0.05.
ValidationReport validate_against_integration(const PerturbationParams& p);

}  // namespace abel
