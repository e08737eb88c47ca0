#include "abel/perturb.hpp"

#include <algorithm>
#include <cmath>

namespace abel {
namespace {

constexpr double kBandMargin = 1e-6;  // stay clear of the integrable edge

void check_params(const PerturbationParams& p) {
  if (p.b1_tilde == 0.0)
    throw std::invalid_argument("PerturbationParams: b1_tilde must be non-zero");
}

void check_band(const PerturbationParams& p, double rho) {
  if (std::abs(p.b1_tilde * rho) >= 1.0)
    throw std::domain_error("rho outside the center band |b1~ rho| < 1");
}

double trig_part(const PerturbationParams& p, double t) {
  return p.a0_tilde + p.a1_tilde * std::cos(kTwoPi * t) +
         p.a2_tilde * std::sin(kTwoPi * t);
}

// Adaptive Simpson for the bifurcation integrand.
template <class Fn>
double adaptive_simpson(Fn&& f, double a, double b, double tol) {
  struct Frame {
    double a, b, fa, fm, fb, whole, tol;
    int depth;
  };
  auto simpson = [](double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
  };
  const double m0 = 0.5 * (a + b);
  std::vector<Frame> stack;
  stack.push_back({a, b, f(a), f(m0), f(b),
                   simpson(f(a), f(m0), f(b), b - a), tol, 52});
  double total = 0.0;
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    const double m = 0.5 * (fr.a + fr.b);
    const double lm = 0.5 * (fr.a + m), rm = 0.5 * (m + fr.b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(fr.fa, flm, fr.fm, m - fr.a);
    const double right = simpson(fr.fm, frm, fr.fb, fr.b - m);
    const double err = (left + right - fr.whole) / 15.0;
    if (fr.depth <= 0 || std::abs(err) <= fr.tol) {
      total += left + right + err;
    } else {
      stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left, 0.5 * fr.tol, fr.depth - 1});
      stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right, 0.5 * fr.tol, fr.depth - 1});
    }
  }
  return total;
}

}  // namespace

double center_solution(const PerturbationParams& p, double rho, double t) {
  check_params(p);
  check_band(p, rho);
  return rho / (1.0 - rho * p.b1_tilde * std::sin(kTwoPi * t));
}

double w_hat_quadrature(const PerturbationParams& p, double rho) {
  check_params(p);
  check_band(p, rho);
  return adaptive_simpson(
      [&p, rho](double t) {
        return p.b0_tilde +
               trig_part(p, t) * rho / (1.0 - p.b1_tilde * rho * std::sin(kTwoPi * t));
      },
      0.0, 1.0, 1e-11);
}

double w_hat_closed_form(const PerturbationParams& p, double rho) {
  check_params(p);
  check_band(p, rho);
  const double y = std::asin(p.b1_tilde * rho);
  return (p.a0_tilde * std::sin(y) +
          (p.b0_tilde * p.b1_tilde - p.a2_tilde) * std::cos(y) + p.a2_tilde) /
         (p.b1_tilde * std::cos(y));
}

double w_hat_max_discrepancy(const PerturbationParams& p, int n_grid) {
  check_params(p);
  const double lim = (1.0 - 1e-3) / std::abs(p.b1_tilde);
  double worst = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double rho = -lim + 2.0 * lim * i / (n_grid - 1);
    worst = std::max(worst,
                     std::abs(w_hat_quadrature(p, rho) - w_hat_closed_form(p, rho)));
  }
  return worst;
}

BifurcationRoots predict_bifurcating_orbits(const PerturbationParams& p) {
  check_params(p);
  BifurcationRoots out;
  const double lim = (1.0 - kBandMargin) / std::abs(p.b1_tilde);
  constexpr int kGrid = 2001;
  std::vector<double> rs(kGrid), vs(kGrid);
  double vmax = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    rs[i] = -lim + 2.0 * lim * i / (kGrid - 1);
    vs[i] = w_hat_quadrature(p, rs[i]);
    vmax = std::max(vmax, std::abs(vs[i]));
  }
  const double scale = std::max({1.0, std::abs(p.a0_tilde), std::abs(p.a1_tilde),
                                 std::abs(p.a2_tilde), std::abs(p.b0_tilde)});
  if (vmax <= 1e-12 * scale) {
    out.degenerate = true;
    return out;
  }
  const double exclude = 1e-6 * lim;  // rho = 0 belongs to the zero solution
  for (int i = 0; i + 1 < kGrid; ++i) {
    if (vs[i] == 0.0 || vs[i] * vs[i + 1] >= 0.0) continue;
    double lo = rs[i], hi = rs[i + 1], flo = vs[i];
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double fm = w_hat_quadrature(p, mid);
      if (flo * fm <= 0.0) hi = mid;
      else { lo = mid; flo = fm; }
    }
    const double rho = 0.5 * (lo + hi);
    if (std::abs(rho) <= exclude) continue;
    BifurcationRoot root;
    root.rho = rho;
    const double h = 1e-6 * lim;
    root.w_hat_slope =
        (w_hat_quadrature(p, std::min(rho + h, lim)) -
         w_hat_quadrature(p, std::max(rho - h, -lim))) /
        (std::min(rho + h, lim) - std::max(rho - h, -lim));
    root.simple = std::abs(root.w_hat_slope) > 1e-8 * scale;
    out.roots.push_back(root);
  }
  return out;
}

AbelEquation perturbed_equation(const PerturbationParams& p) {
  check_params(p);
  TrigPoly A{p.epsilon * p.a0_tilde,
             {p.epsilon * p.a1_tilde},
             {p.epsilon * p.a2_tilde}};
  TrigPoly B{p.epsilon * p.b0_tilde, {kTwoPi * p.b1_tilde}, {0.0}};
  return AbelEquation(CoefficientFunction(A), CoefficientFunction(B));
}

namespace {

std::vector<double> nonzero_orbits_in_band(const PerturbationParams& p,
                                           double eps, double band) {
  PerturbationParams q = p;
  q.epsilon = eps;
  const AbelEquation eq = perturbed_equation(q);
  ScanConfig cfg;
  cfg.x_min = -band;
  cfg.x_max = band;
  cfg.n_points = 1601;
  cfg.log_densify = false;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-12;
  std::vector<double> found;
  for (const auto& orbit : find_periodic_orbits(eq, cfg).orbits)
    if (orbit.stability != Stability::ZeroSolution) found.push_back(orbit.x0);
  return found;
}

}  // namespace

ValidationReport validate_against_integration(const PerturbationParams& p) {
  check_params(p);
  if (!(p.epsilon > 0.0 && p.epsilon <= 0.05))
    throw std::invalid_argument(
        "validate_against_integration: epsilon must lie in (0, 0.05]");

  const double band = (1.0 - 1e-3) / std::abs(p.b1_tilde);
  const BifurcationRoots pred = predict_bifurcating_orbits(p);
  const std::vector<double> at_eps = nonzero_orbits_in_band(p, p.epsilon, band);
  const std::vector<double> at_half =
      nonzero_orbits_in_band(p, 0.5 * p.epsilon, band);

  ValidationReport out;
  out.orbit_count = static_cast<int>(at_eps.size());
  std::vector<bool> used(at_eps.size(), false);

  const AbelEquation eq = perturbed_equation(p);
  for (const auto& root : pred.roots) {
    ValidationRow row;
    row.rho_predicted = root.rho;
    // Nearest found orbit at eps.
    size_t best = at_eps.size();
    for (size_t i = 0; i < at_eps.size(); ++i) {
      if (used[i]) continue;
      if (best == at_eps.size() ||
          std::abs(at_eps[i] - root.rho) < std::abs(at_eps[best] - root.rho))
        best = i;
    }
    if (best < at_eps.size() &&
        std::abs(at_eps[best] - root.rho) <= 100.0 * p.epsilon) {
      used[best] = true;
      row.matched = true;
      row.x0_found = at_eps[best];
      row.gap = std::abs(at_eps[best] - root.rho);
      row.multiplier = solve_with_variation(eq, at_eps[best], 1e-11, 1e-12).v1;
      for (double x : at_half)
        if (row.x0_found_half == 0.0 ||
            std::abs(x - root.rho) < std::abs(row.x0_found_half - root.rho))
          row.x0_found_half = x;
      row.gap_half = std::abs(row.x0_found_half - root.rho);
    }
    out.rows.push_back(row);
  }
  for (size_t i = 0; i < at_eps.size(); ++i)
    if (!used[i]) out.unmatched_orbits.push_back(at_eps[i]);
  return out;
}

}  // namespace abel
