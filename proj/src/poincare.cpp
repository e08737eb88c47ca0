#include "abel/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace abel {
namespace {

// Composite Simpson over the (odd-count) uniform trajectory samples.
template <class Fn>
double simpson_over_samples(const std::vector<double>& ts,
                            const std::vector<double>& xs, Fn&& integrand) {
  const size_t n = ts.size();
  if (n < 3) return 0.0;
  const size_t m = (n % 2 == 1) ? n : n - 1;  // ensure an even interval count
  const double h = ts[1] - ts[0];
  double s = integrand(ts[0], xs[0]) + integrand(ts[m - 1], xs[m - 1]);
  for (size_t i = 1; i + 1 < m; ++i)
    s += integrand(ts[i], xs[i]) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double poly_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (size_t i = c.size(); i-- > 0;) s = s * x + c[i];
  return s;
}

double poly_deriv_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (size_t i = c.size(); i-- > 1;) s = s * x + static_cast<double>(i) * c[i];
  return s;
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::AttractingHyperbolic: return "attracting_hyperbolic";
    case Stability::RepellingHyperbolic: return "repelling_hyperbolic";
    case Stability::NonHyperbolic: return "non_hyperbolic";
    case Stability::ZeroSolution: return "zero_solution";
  }
  return "?";
}

std::optional<double> poincare_map(const AbelEquation& eq, double x0,
                                   double rel_tol, double abs_tol) {
  try {
    Trajectory t = solve_ivp(eq, x0, rel_tol, abs_tol);
    if (!t.completed()) return std::nullopt;
    return t.x1;
  } catch (const IntegrationError&) {
    return std::nullopt;
  }
}

namespace {

std::vector<double> build_scan_grid(const ScanConfig& cfg) {
  std::set<double> grid;
  const int n_uniform = cfg.log_densify ? cfg.n_points / 2 : cfg.n_points;
  for (int i = 0; i < n_uniform; ++i)
    grid.insert(cfg.x_min + (cfg.x_max - cfg.x_min) * i / (n_uniform - 1));
  grid.insert(0.0);
  if (cfg.log_densify) {
    const int per_side = cfg.n_points / 4;
    const double hi_pos = cfg.x_max > 0 ? cfg.x_max : 0.0;
    const double hi_neg = cfg.x_min < 0 ? -cfg.x_min : 0.0;
    const double lo = 1e-6;
    for (int i = 0; i < per_side; ++i) {
      const double f = static_cast<double>(i) / (per_side - 1);
      if (hi_pos > lo)
        grid.insert(lo * std::pow(hi_pos / lo, f));
      if (hi_neg > lo)
        grid.insert(-lo * std::pow(hi_neg / lo, f));
    }
  }
  return {grid.begin(), grid.end()};
}

Stability classify_multiplier(double multiplier) {
  if (std::abs(multiplier - 1.0) <= kHyperbolicityTol)
    return Stability::NonHyperbolic;
  return multiplier < 1.0 ? Stability::AttractingHyperbolic
                          : Stability::RepellingHyperbolic;
}

}  // namespace

ScanResult find_periodic_orbits(const AbelEquation& eq, const ScanConfig& cfg) {
  if (!(cfg.x_min < cfg.x_max) || cfg.n_points < 3)
    throw std::invalid_argument("find_periodic_orbits: invalid scan config");

  ScanResult out;
  const std::vector<double> xs = build_scan_grid(cfg);
  const size_t n = xs.size();
  std::vector<bool> valid(n, false);
  std::vector<double> d(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const auto p = poincare_map(eq, xs[i], cfg.rel_tol, cfg.abs_tol);
    if (p) {
      valid[i] = true;
      d[i] = *p - xs[i];
      out.displacement.emplace_back(xs[i], d[i]);
      ++out.completed_nodes;
    } else {
      ++out.escaped_nodes;
    }
  }

  // Center bands: maximal runs of completed nodes at residual-level
  // displacement, wide enough to exclude the flat neighbourhood that the
  // multiplicity >= 2 zero solution produces on its own.
  const double band_tol = std::max(10.0 * cfg.abs_tol, 1e-14);
  constexpr int kBandMinNodes = 5;
  constexpr double kBandMinReach = 0.01;  // outermost |x| a band must reach
  std::vector<bool> in_band(n, false);
  {
    size_t i = 0;
    while (i < n) {
      if (!valid[i] || std::abs(d[i]) > band_tol) { ++i; continue; }
      size_t j = i;
      while (j + 1 < n && valid[j + 1] && std::abs(d[j + 1]) <= band_tol) ++j;
      const double reach = std::max(std::abs(xs[i]), std::abs(xs[j]));
      if (static_cast<int>(j - i + 1) >= kBandMinNodes && reach >= kBandMinReach) {
        // Confirm with 64 probes across the run.
        bool confirmed = true;
        for (int q = 0; q < 64 && confirmed; ++q) {
          const double x = xs[i] + (xs[j] - xs[i]) * q / 63.0;
          const auto p = poincare_map(eq, x, cfg.rel_tol, cfg.abs_tol);
          confirmed = p && std::abs(*p - x) <= band_tol;
        }
        if (confirmed) {
          out.center_bands.push_back({xs[i], xs[j]});
          for (size_t q = i; q <= j; ++q) in_band[q] = true;
        }
      }
      i = j + 1;
    }
  }

  // Root brackets between adjacent completed nodes outside bands.
  std::vector<double> roots;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!valid[i] || !valid[i + 1] || in_band[i] || in_band[i + 1]) continue;
    if (d[i] == 0.0 || d[i] * d[i + 1] >= 0.0) continue;
    double lo = xs[i], hi = xs[i + 1], dlo = d[i];
    bool ok = true;
    while (hi - lo > cfg.refine_tol * std::max(1.0, std::abs(lo))) {
      const double mid = 0.5 * (lo + hi);
      const auto pm = poincare_map(eq, mid, cfg.rel_tol, cfg.abs_tol);
      if (!pm) {
        out.warnings.push_back("bracket at x0 ~ " + std::to_string(mid) +
                               " crosses an escape region; root claim dropped");
        ok = false;
        break;
      }
      const double dm = *pm - mid;
      if (dlo * dm <= 0.0) hi = mid;
      else { lo = mid; dlo = dm; }
    }
    if (ok) roots.push_back(0.5 * (lo + hi));
  }

  // Deduplicate and drop the zero solution (reported separately).
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique_roots;
  for (double r : roots) {
    if (std::abs(r) <= 10.0 * cfg.refine_tol) continue;
    if (!unique_roots.empty() &&
        std::abs(r - unique_roots.back()) <= 10.0 * cfg.refine_tol)
      continue;
    unique_roots.push_back(r);
  }

  // The zero solution record.
  {
    OrbitRecord zero;
    zero.x0 = 0.0;
    zero.trajectory = solve_ivp(eq, 0.0, cfg.rel_tol, cfg.abs_tol);
    const double ic = integrate_exact(eq.C, 0.0, 1.0);
    zero.multiplier = std::exp(ic);
    zero.stability = Stability::ZeroSolution;
    zero.residual = 0.0;
    out.orbits.push_back(std::move(zero));
  }

  for (double r : unique_roots) {
    OrbitRecord rec;
    rec.x0 = r;
    rec.trajectory = solve_ivp(eq, r, cfg.rel_tol, cfg.abs_tol);
    if (!rec.trajectory.completed()) continue;
    rec.residual = std::abs(rec.trajectory.x1 - r);
    const VariationalResult var =
        solve_with_variation(eq, r, cfg.rel_tol, cfg.abs_tol);
    rec.multiplier = var.v1;
    rec.stability = classify_multiplier(var.v1);
    if (rec.residual > cfg.residual_tol)
      out.warnings.push_back("orbit at x0 = " + std::to_string(r) +
                             " has residual " + std::to_string(rec.residual));
    out.orbits.push_back(std::move(rec));
  }

  std::sort(out.orbits.begin(), out.orbits.end(),
            [](const OrbitRecord& a, const OrbitRecord& b) { return a.x0 < b.x0; });

  // The map is strictly increasing where defined; a violation means the
  // integration tolerances are too loose for this equation.
  for (size_t i = 0; i + 1 < out.displacement.size(); ++i) {
    const auto& [xa, da] = out.displacement[i];
    const auto& [xb, db] = out.displacement[i + 1];
    if (xa + da >= xb + db) {
      out.warnings.push_back("monotonicity violation between x0 = " +
                             std::to_string(xa) + " and " + std::to_string(xb));
      break;
    }
  }
  return out;
}

double multiplier_by_formula(const AbelEquation& eq, const OrbitRecord& orbit) {
  if (!orbit.trajectory.completed())
    throw std::invalid_argument("multiplier_by_formula: trajectory not completed");
  const double integral = simpson_over_samples(
      orbit.trajectory.times, orbit.trajectory.values,
      [&eq](double t, double x) { return eq.rhs_dx(t, x); });
  return std::exp(integral);
}

WeightFunction WeightFunction::time_only(CoefficientFunction p) {
  WeightFunction g;
  g.kind = Kind::TimeOnly;
  g.p = std::move(p);
  return g;
}

WeightFunction WeightFunction::separable_power(std::vector<double> f_coeffs,
                                               double w) {
  if (w == 0.0)
    throw std::invalid_argument("WeightFunction: exponent w must be non-zero");
  WeightFunction g;
  g.kind = Kind::SeparablePower;
  g.f_coeffs = std::move(f_coeffs);
  g.w = w;
  return g;
}

WeightedDivergence weighted_divergence_check(const AbelEquation& eq,
                                             const OrbitRecord& orbit,
                                             const WeightFunction& g) {
  if (!orbit.trajectory.completed())
    throw std::invalid_argument("weighted_divergence_check: orbit not completed");
  const auto& ts = orbit.trajectory.times;
  const auto& xs = orbit.trajectory.values;

  // div(|g| X)/|g| = d/dt log|g| + h * d/dx log|g| + dh/dx along the orbit.
  auto integrand = [&](double t, double x) {
    double dlog = 0.0;
    if (g.kind == WeightFunction::Kind::TimeOnly) {
      const double pv = g.p.eval(t);
      if (!(pv > 0.0))
        throw std::domain_error("weighted_divergence_check: weight not positive");
      dlog = g.p.derivative_at(t) / pv;
    } else {
      const double fv = poly_eval(g.f_coeffs, x);
      if (fv == 0.0)
        throw std::domain_error(
            "weighted_divergence_check: weight vanishes on the trajectory");
      dlog = poly_deriv_eval(g.f_coeffs, x) / (g.w * fv) * eq.rhs(t, x);
    }
    return dlog + eq.rhs_dx(t, x);
  };

  // Reject weights that vanish anywhere along the samples before
  // integrating (the quadrature would silently step over a pole).
  if (g.kind == WeightFunction::Kind::SeparablePower) {
    double fmin = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (double x : xs) {
      fmin = std::min(fmin, std::abs(poly_eval(g.f_coeffs, x)));
      scale = std::max(scale, std::abs(x));
    }
    for (double c : g.f_coeffs) scale = std::max(scale, std::abs(c));
    if (fmin <= 1e-12 * std::max(1.0, scale))
      throw std::domain_error(
          "weighted_divergence_check: weight vanishes on the trajectory");
  }

  auto log_g = [&](double t, double x) {
    if (g.kind == WeightFunction::Kind::TimeOnly) {
      const double pv = g.p.eval(t);
      if (!(pv > 0.0))
        throw std::domain_error("weighted_divergence_check: weight not positive");
      return std::log(pv);
    }
    return std::log(std::abs(poly_eval(g.f_coeffs, x))) / g.w;
  };

  const VariationalResult var = solve_with_variation(eq, orbit.x0, 1e-11, 1e-12);
  WeightedDivergence out;
  out.lhs = std::log(var.v1);
  out.rhs = log_g(0.0, xs.front()) - log_g(1.0, xs.back()) +
            simpson_over_samples(ts, xs, integrand);
  return out;
}

ZeroClassification classify_zero(const AbelEquation& eq, double probe_radius,
                                 double rel_tol, double abs_tol) {
  if (!(probe_radius > 0.0))
    throw std::invalid_argument("classify_zero: probe_radius must be positive");
  if (!eq.c_is_zero())
    throw std::invalid_argument(
        "classify_zero: multiplicity ladder requires C identically zero");

  ZeroClassification out;
  out.constants = lyapunov_constants(eq);
  out.family_exact = out.constants.method != LyapunovMethod::Quadrature;

  // Shrink the probe radius until both one-sided solutions complete.
  double r = probe_radius;
  for (int tries = 0; tries < 40; ++tries) {
    if (poincare_map(eq, r, rel_tol, abs_tol) &&
        poincare_map(eq, -r, rel_tol, abs_tol))
      break;
    r *= 0.5;
  }
  for (double x : {-r, -0.5 * r, -0.25 * r, 0.25 * r, 0.5 * r, r}) {
    if (const auto p = poincare_map(eq, x, rel_tol, abs_tol))
      out.probes.emplace_back(x, *p - x);
  }

  const LyapunovConstants& c = out.constants;
  if (!c.v2_zero()) {
    out.kind = ZeroKind::SemiStable;
    out.multiplicity = 2;
    out.semistable_sign = c.v2 > 0 ? 1 : -1;
    return out;
  }
  if (!c.v3_zero()) {
    out.kind = ZeroKind::OrdinaryMultiplicity;
    out.multiplicity = 3;
    return out;
  }
  if (!c.v4_zero()) {
    out.kind = ZeroKind::OrdinaryMultiplicity;
    out.multiplicity = 4;
    return out;
  }

  if (out.family_exact && c.center_verdict == CenterVerdict::Center) {
    out.kind = ZeroKind::CenterBand;
    out.multiplicity = 0;
    // Numeric confirmation: 64 probes at residual-level displacement.
    bool confirmed = true;
    for (int q = 0; q < 64 && confirmed; ++q) {
      const double x = -r + 2.0 * r * q / 63.0;
      const auto p = poincare_map(eq, x, rel_tol, abs_tol);
      confirmed = p && std::abs(*p - x) <= 10.0 * abs_tol;
    }
    if (!confirmed)
      out.notes = "center conditions hold but probes exceed tolerance";
    return out;
  }

  out.kind = ZeroKind::OrdinaryMultiplicity;
  out.multiplicity = 5;
  out.multiplicity_is_lower_bound = true;
  out.notes = "all computed constants vanish; center status undecidable "
              "for this coefficient family";
  return out;
}

}  // namespace abel
