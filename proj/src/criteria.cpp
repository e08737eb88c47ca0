#include "abel/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abel/lyapunov.hpp"

namespace abel {
namespace {

constexpr double kZeroTol = 1e-12;

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

SignClass certify_combination(const AbelEquation& eq, double a, double b) {
  return sign_range(linear_combination(a, eq.A, b, eq.B));
}

bool usable(const SignClass& sc) {
  return sc.sign_definite();  // excludes IdenticallyZero and ChangesSign
}

}  // namespace

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::CombinationSearch: return "combination_search";
    case WitnessKind::AOnly: return "a_only";
    case WitnessKind::BOnly: return "b_only";
    case WitnessKind::TrigCondA: return "trig_cond_a";
    case WitnessKind::TrigCondB: return "trig_cond_b";
    case WitnessKind::TrigCondMixed: return "trig_cond_mixed";
    case WitnessKind::PolyCond1: return "poly_cond_1";
    case WitnessKind::PolyCond2: return "poly_cond_2";
    case WitnessKind::PolyCond3: return "poly_cond_3";
    case WitnessKind::MatchedEndpoints: return "matched_endpoints";
    case WitnessKind::ZeroMeanC: return "zero_mean_c";
    case WitnessKind::CubicDulac: return "cubic_dulac";
    case WitnessKind::Separable: return "separable";
  }
  return "?";
}

double mw_evaluate(const AbelEquation& eq, const DulacData& d, double t, double x) {
  if (d.w == 0.0) throw std::invalid_argument("mw_evaluate: w must be non-zero");
  const double h = eq.rhs(t, x);
  const double hx = eq.rhs_dx(t, x);
  return poly_deriv_eval(d.f_coeffs, x) * h + d.w * poly_eval(d.f_coeffs, x) * hx;
}

// ---------------------------------------------------------------------------
// Degree-1 trig conditions

TrigConditions trig_uniqueness_conditions(double a0, double a1, double a2,
                                          double b0, double b1, double b2) {
  TrigConditions out;
  const double ga = a0 * a0 - a1 * a1 - a2 * a2;   // q(0)
  const double al = b0 * b0 - b1 * b1 - b2 * b2;   // leading coefficient of q
  const double p = a0 * b0 - a1 * b1 - a2 * b2;    // half the linear coefficient
  const double cross = (a2 * b0 - a0 * b2) * (a2 * b0 - a0 * b2) +
                       (a0 * b1 - a1 * b0) * (a0 * b1 - a1 * b0) -
                       (a2 * b1 - a1 * b2) * (a2 * b1 - a1 * b2);
  out.cond_a = ga >= 0.0;
  out.cond_b = al >= 0.0;
  out.cond_mixed = cross >= 0.0;  // equals the discriminant of q over 4

  // Direct feasibility of q(m) >= 0 for some m, plus the (0,1) axis.
  const bool q_any = (al > 0.0) || (al == 0.0 && p != 0.0) ||
                     (al == 0.0 && p == 0.0 && ga >= 0.0) ||
                     (al < 0.0 && cross >= 0.0);
  out.q_feasible = q_any || out.cond_b;
  out.disagreement = out.q_feasible != (out.cond_a || out.cond_b || out.cond_mixed);

  const bool a_nonzero = (a0 != 0.0 || a1 != 0.0 || a2 != 0.0);
  const bool b_nonzero = (b0 != 0.0 || b1 != 0.0 || b2 != 0.0);
  if (out.cond_a && a_nonzero) {
    out.witness = Witness{1.0, 0.0, 0.0, WitnessKind::TrigCondA};
  } else if (out.cond_b && b_nonzero) {
    out.witness = Witness{0.0, 1.0, 0.0, WitnessKind::TrigCondB};
  } else if (out.cond_mixed && al < 0.0) {
    // Vertex of the downward parabola q; q(m*) = -cross/al >= 0 there.
    const double m = p / al;
    const bool combo_nonzero = (b0 * m - a0) != 0.0 || (b1 * m - a1) != 0.0 ||
                               (b2 * m - a2) != 0.0;
    if (combo_nonzero)
      out.witness = Witness{-1.0, m, 0.0, WitnessKind::TrigCondMixed};
  }
  return out;
}

bool trig_no_orbit_test(double a0, double a1, double a2, double b0, double b1,
                        double b2) {
  const bool first = (a0 * a0 > a1 * a1 + a2 * a2) || (b0 * b0 > b1 * b1 + b2 * b2);
  const double lhs = (a2 * b0 - a0 * b2) * (a2 * b0 - a0 * b2) +
                     (a0 * b1 - a1 * b0) * (a0 * b1 - a1 * b0);
  const double rhs = (a2 * b1 - a1 * b2) * (a2 * b1 - a1 * b2);
  return first && lhs < rhs;
}

// ---------------------------------------------------------------------------
// Three-monomial conditions

namespace {

// ratio v/w lies in the open interval (-1, 0)?
bool ratio_in_open_unit(double v, double w) {
  return v * w < 0.0 && std::abs(v) < std::abs(w);
}

}  // namespace

PolyConditions poly_uniqueness_conditions(double a0, double a1, double a2,
                                          double b0, double b1, double b2,
                                          int j, int k) {
  if (!(0 < j && j < k))
    throw std::invalid_argument("poly_uniqueness_conditions: need 0 < j < k");
  PolyConditions out;

  struct Case {
    double v, w;       // combination is v + w t^m (times t^j for case 3)
    double wa, wb;     // witness constants
    WitnessKind kind;
  };
  const Case cases[3] = {
      {a2 * b0 - a0 * b2, a2 * b1 - a1 * b2, -b2, a2, WitnessKind::PolyCond1},
      {a1 * b0 - a0 * b1, a1 * b2 - a2 * b1, -b1, a1, WitnessKind::PolyCond2},
      {a0 * b1 - a1 * b0, a0 * b2 - a2 * b0, -b0, a0, WitnessKind::PolyCond3},
  };
  bool conds[3];
  for (int i = 0; i < 3; ++i)
    conds[i] = cases[i].w == 0.0 || !ratio_in_open_unit(cases[i].v, cases[i].w);
  out.cond1 = conds[0];
  out.cond2 = conds[1];
  out.cond3 = conds[2];

  for (int i = 0; i < 3; ++i) {
    if (!conds[i]) continue;
    if (cases[i].v == 0.0 && cases[i].w == 0.0) continue;  // combination vanishes
    out.witness = Witness{cases[i].wa, cases[i].wb, 0.0, cases[i].kind};
    break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witness search

namespace {

std::optional<Witness> search_directions(const AbelEquation& eq, int n_angles) {
  const double pi = 0.5 * kTwoPi;
  // Sign-definiteness score of the direction: >= 0 iff a*A + b*B keeps one
  // sign. score = max(min f, -max f).
  auto score = [&eq](double theta, SignClass* out_sc = nullptr) {
    const SignClass sc =
        certify_combination(eq, std::cos(theta), std::sin(theta));
    if (out_sc != nullptr) *out_sc = sc;
    return std::max(sc.min_value, -sc.max_value);
  };

  double best_theta = 0.0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_angles; ++i) {
    const double theta = pi * i / n_angles;
    const double s = score(theta);
    if (s > best_score) {
      best_score = s;
      best_theta = theta;
    }
  }
  // Golden-section refinement of the best direction.
  {
    constexpr double kGolden = 0.61803398874989484820;
    double lo = best_theta - pi / n_angles;
    double hi = best_theta + pi / n_angles;
    double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
    double f1 = score(x1), f2 = score(x2);
    while (hi - lo > 1e-10) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + kGolden * (hi - lo); f2 = score(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - kGolden * (hi - lo); f1 = score(x1);
      }
    }
    best_theta = 0.5 * (lo + hi);
  }

  SignClass sc;
  score(best_theta, &sc);
  if (!usable(sc)) return std::nullopt;
  return Witness{std::cos(best_theta), std::sin(best_theta), 0.0,
                 WitnessKind::CombinationSearch};
}

}  // namespace

std::optional<Witness> witness_search(const AbelEquation& eq, int n_angles) {
  if (n_angles < 16) throw std::invalid_argument("witness_search: n_angles < 16");
  if (!eq.c_is_zero())
    throw std::invalid_argument("witness_search: requires C identically zero");

  // Exact feasibility for the degree-1 trig family (the three conditions
  // are the whole feasible set, so a miss is final).
  const auto ta = as_trig1(eq.A);
  const auto tb = as_trig1(eq.B);
  if (ta && tb) {
    TrigConditions tc =
        trig_uniqueness_conditions(ta->c0, ta->c1, ta->s1, tb->c0, tb->c1, tb->s1);
    if (tc.witness && usable(certify_combination(eq, tc.witness->a, tc.witness->b)))
      return tc.witness;
    return std::nullopt;
  }

  // Exact conditions for the three-monomial family, then the sign-definite
  // coefficient shortcuts, then the generic direction scan.
  if (const auto jk = common_poly_exponents(eq)) {
    const auto pa = as_poly3(eq.A, jk->first, jk->second);
    const auto pb = as_poly3(eq.B, jk->first, jk->second);
    if (pa && pb) {
      PolyConditions pc = poly_uniqueness_conditions(
          (*pa)[0], (*pa)[1], (*pa)[2], (*pb)[0], (*pb)[1], (*pb)[2], jk->first,
          jk->second);
      if (pc.witness && usable(certify_combination(eq, pc.witness->a, pc.witness->b)))
        return pc.witness;
    }
  }
  if (usable(sign_range(eq.A))) return Witness{1.0, 0.0, 0.0, WitnessKind::AOnly};
  if (usable(sign_range(eq.B))) return Witness{0.0, 1.0, 0.0, WitnessKind::BOnly};
  return search_directions(eq, n_angles);
}

// ---------------------------------------------------------------------------
// Region prediction

std::optional<RegionPrediction> predict_orbit_region(const AbelEquation& eq,
                                                     const Witness& w) {
  if (w.b == 0.0) return std::nullopt;
  const SignClass sc = certify_combination(eq, w.a, w.b);
  if (!sc.sign_definite()) return std::nullopt;

  const double inf = HUGE_VAL;
  double ia = integrate_exact(eq.A, 0.0, 1.0);
  double ib = integrate_exact(eq.B, 0.0, 1.0);
  double ratio = w.a / w.b;
  const double combo_sign = sc.verdict == SignVerdict::NonNegative ? 1.0 : -1.0;
  double h_sign = combo_sign * (w.b > 0.0 ? 1.0 : -1.0);

  bool flipped_x = false;
  if (ratio < 0.0) {
    // x -> -x maps (A,B) to (A,-B) and the witness to (a,-b): the ratio
    // and the sign of h both flip.
    flipped_x = true;
    ratio = -ratio;
    h_sign = -h_sign;
    ib = -ib;
  }
  if (ratio == 0.0) return std::nullopt;  // a = 0: no ratio line to compare with
  if (h_sign < 0.0) {
    // t -> 1-t with coefficient reflection flips the sign of both
    // coefficient integrals; x-regions are unchanged.
    ia = -ia;
    ib = -ib;
  }

  const double itol = 1e-12 * std::max(1.0, eq.A.coefficient_scale() +
                                                eq.B.coefficient_scale());
  RegionPrediction region;
  if (std::abs(ia) <= itol || (ia > 0.0 && std::abs(ib) <= itol)) {
    region.kind = RegionPrediction::Kind::NoNonzeroOrbit;
    region.lower = 0.0;
    region.upper = 0.0;
    region.description = "x = 0 is the only periodic orbit";
  } else if (ia < 0.0) {
    region.kind = RegionPrediction::Kind::Above;
    region.lower = ratio;
    region.upper = inf;
  } else if (ib > 0.0) {
    region.kind = RegionPrediction::Kind::BelowZero;
    region.lower = -inf;
    region.upper = 0.0;
  } else {
    region.kind = RegionPrediction::Kind::BetweenZeroAndRatio;
    region.lower = 0.0;
    region.upper = ratio;
    region.guaranteed_exists = true;
  }

  if (flipped_x && region.kind != RegionPrediction::Kind::NoNonzeroOrbit) {
    const double lo = -region.upper, hi = -region.lower;
    region.lower = lo;
    region.upper = hi;
  }
  if (region.description.empty()) {
    region.description = "orbit in (" + std::to_string(region.lower) + ", " +
                         std::to_string(region.upper) + ")" +
                         (region.guaranteed_exists ? ", existence guaranteed" : "");
  }
  return region;
}

// ---------------------------------------------------------------------------
// Criterion reports

namespace {

CriterionReport not_applicable(std::string name, std::string why) {
  CriterionReport r;
  r.criterion = std::move(name);
  r.applies = false;
  r.notes = std::move(why);
  return r;
}

CriterionReport unique_orbit_report(const AbelEquation& eq, std::string name,
                                    Witness w) {
  CriterionReport r;
  r.criterion = std::move(name);
  r.sign_evidence = certify_combination(eq, w.a, w.b);
  r.applies = r.sign_evidence.sign_definite();
  r.witness = w;
  if (r.applies) {
    r.orbit_bound = 1;
    r.hyperbolic_guarantee = true;
    r.location = predict_orbit_region(eq, w);
  }
  return r;
}

}  // namespace

CriterionReport matched_endpoints_criterion(double a0, double a1, double a2,
                                            double b0, double b1, double b2,
                                            int j, int k) {
  const std::string name = "matched_endpoints";
  const double scale = std::max(1.0, std::abs(a0) + std::abs(a1) + std::abs(a2) +
                                         std::abs(b0) + std::abs(b1) + std::abs(b2));
  if (std::abs(a1 + a2) > kZeroTol * scale || std::abs(b1 + b2) > kZeroTol * scale)
    return not_applicable(name, "requires a1 + a2 = b1 + b2 = 0");
  if (center_test_poly3(a0, a1, a2, b0, b1, b2, j, k))
    return not_applicable(name, "x = 0 is a center for these coefficients");

  const AbelEquation eq(
      CoefficientFunction(MonomialPoly::from_terms({{0, a0}, {j, a1}, {k, a2}})),
      CoefficientFunction(MonomialPoly::from_terms({{0, b0}, {j, b1}, {k, b2}})));

  PolyConditions pc = poly_uniqueness_conditions(a0, a1, a2, b0, b1, b2, j, k);
  if (pc.witness) {
    CriterionReport r = unique_orbit_report(eq, name, *pc.witness);
    if (r.applies) {
      r.witness->kind = WitnessKind::MatchedEndpoints;
      r.notes = std::string("via ") + to_string(pc.witness->kind);
      return r;
    }
  }
  if (usable(sign_range(eq.A)))
    return unique_orbit_report(eq, name, Witness{1, 0, 0, WitnessKind::AOnly});
  if (usable(sign_range(eq.B)))
    return unique_orbit_report(eq, name, Witness{0, 1, 0, WitnessKind::BOnly});

  // Every combination degenerates: A and B are proportional (or one
  // vanishes) and the equation separates as f(t) P(x).
  const double na = std::abs(a0) + std::abs(a1) + std::abs(a2);
  const double nb = std::abs(b0) + std::abs(b1) + std::abs(b2);
  CriterionReport r;
  r.criterion = name;
  if (nb <= kZeroTol * scale) {
    // B = 0: dx/dt = A(t) x^3; the only periodic orbit is x = 0.
    const double ia = a0 + a1 / (j + 1) + a2 / (k + 1);
    r.applies = true;
    r.witness = Witness{1.0, 0.0, 0.0, WitnessKind::Separable};
    r.sign_evidence = sign_range(CoefficientFunction::constant(ia));
    r.orbit_bound = 0;
    r.notes = "B vanishes; x^3 factor has no non-zero root";
    return r;
  }
  if (na <= kZeroTol * scale) {
    // A = 0: dx/dt = B(t) x^2; again only x = 0.
    const double ib = b0 + b1 / (j + 1) + b2 / (k + 1);
    r.applies = true;
    r.witness = Witness{0.0, 1.0, 0.0, WitnessKind::Separable};
    r.sign_evidence = sign_range(CoefficientFunction::constant(ib));
    r.orbit_bound = 0;
    r.notes = "A vanishes; x^2 factor has no non-zero root";
    return r;
  }
  // A = c B with c != 0: dx/dt = B(t) x^2 (c x + 1); the only candidate
  // non-zero orbit is the simple factor root x = -1/c, hyperbolic since
  // int B != 0 here (the center case was excluded above).
  double c = 0.0;
  if (std::abs(b1) > kZeroTol * scale) c = a1 / b1;
  else if (std::abs(b2) > kZeroTol * scale) c = a2 / b2;
  else c = a0 / b0;
  const double ib = b0 + b1 / (j + 1) + b2 / (k + 1);
  r.applies = true;
  r.witness = Witness{c, 1.0, 0.0, WitnessKind::Separable};
  r.sign_evidence = sign_range(CoefficientFunction::constant(ib));
  r.orbit_bound = 1;
  r.hyperbolic_guarantee = true;
  r.notes = "A = c B with c = " + std::to_string(c) +
            "; candidate orbit at x = -1/c";
  return r;
}

CriterionReport zero_mean_c_criterion(
    const AbelEquation& eq, std::optional<std::pair<double, double>> witness_hint) {
  const std::string name = "zero_mean_c";
  const double ic = integrate_exact(eq.C, 0.0, 1.0);
  if (std::abs(ic) > 1e-10 * std::max(1.0, eq.C.coefficient_scale()))
    return not_applicable(
        name, "int_0^1 C = " + std::to_string(ic) +
                  " is non-zero; try the three-parameter criterion");

  // A~(t) = A(t) exp(int_0^t C), materialized on 1025 nodes.
  constexpr int kNodes = 1025;
  const CoefficientFunction a_tilde(SampledFunction::from_function(
      [&eq](double t) {
        return eq.A.eval(t) * std::exp(integrate_exact(eq.C, 0.0, t));
      },
      kNodes));
  const AbelEquation pair(a_tilde, eq.B);

  std::optional<Witness> w;
  if (witness_hint) {
    w = Witness{witness_hint->first, witness_hint->second, 0.0,
                WitnessKind::ZeroMeanC};
    if (!usable(certify_combination(pair, w->a, w->b)))
      return not_applicable(name, "hinted combination is not sign-definite");
  } else {
    w = witness_search(pair);
    if (!w)
      return not_applicable(name,
                            "no sign-definite combination found at this "
                            "resolution (the criterion is sufficient only)");
    w->kind = WitnessKind::ZeroMeanC;
  }

  CriterionReport r;
  r.criterion = name;
  r.applies = true;
  r.witness = w;
  r.sign_evidence = certify_combination(pair, w->a, w->b);
  r.orbit_bound = 1;
  r.hyperbolic_guarantee = true;
  // Region prediction on the transformed two-term equation; its orbits
  // share initial conditions with the original since the change of
  // variables is the identity at t = 0.
  const CoefficientFunction a2t(SampledFunction::from_function(
      [&eq](double t) {
        return eq.A.eval(t) * std::exp(2.0 * integrate_exact(eq.C, 0.0, t));
      },
      kNodes));
  const CoefficientFunction b2t(SampledFunction::from_function(
      [&eq](double t) {
        return eq.B.eval(t) * std::exp(integrate_exact(eq.C, 0.0, t));
      },
      kNodes));
  const AbelEquation transformed(a2t, b2t);
  // The hypothesis combination differs from the transformed equation's
  // aA+bB by the positive factor exp(int C), so the same (a,b) certifies
  // both; reuse it for the location argument.
  r.location = predict_orbit_region(transformed, *w);
  return r;
}

CriterionReport cubic_dulac_criterion(const AbelEquation& eq, double a, double b,
                                      double c) {
  const std::string name = "cubic_dulac";
  CriterionReport r;
  r.criterion = name;
  r.witness = Witness{a, b, c, WitnessKind::CubicDulac};
  r.sign_evidence = certify_combination(eq, a, b);
  if (!r.sign_evidence.sign_definite()) {
    r.notes = "a A + b B is not sign-definite";
    return r;
  }

  // Second condition: (bC - cA)^2 + (aA + bB)(cB + aC) < 0 for all t,
  // certified as max over a refined grid <= -1e-10 * scale.
  const double sa = eq.A.coefficient_scale(), sb = eq.B.coefficient_scale(),
               sc = eq.C.coefficient_scale();
  const double scale = std::max(
      1.0, std::pow(std::abs(b) * sc + std::abs(c) * sa, 2) +
               (std::abs(a) * sa + std::abs(b) * sb) *
                   (std::abs(c) * sb + std::abs(a) * sc));
  auto expr = [&](double t) {
    const double av = eq.A.eval(t), bv = eq.B.eval(t), cv = eq.C.eval(t);
    const double u = b * cv - c * av;
    return u * u + (a * av + b * bv) * (c * bv + a * cv);
  };
  constexpr int kGrid = 2049;
  double max_v = -HUGE_VAL, max_t = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = static_cast<double>(i) / (kGrid - 1);
    const double v = expr(t);
    if (v > max_v) { max_v = v; max_t = t; }
  }
  // Local refinement around the grid maximum.
  {
    double lo = std::max(0.0, max_t - 1.0 / (kGrid - 1));
    double hi = std::min(1.0, max_t + 1.0 / (kGrid - 1));
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (expr(m1) < expr(m2)) lo = m1; else hi = m2;
    }
    const double tm = 0.5 * (lo + hi), vm = expr(tm);
    if (vm > max_v) { max_v = vm; max_t = tm; }
  }

  r.notes = "max of (bC-cA)^2 + (aA+bB)(cB+aC) is " + std::to_string(max_v) +
            " at t = " + std::to_string(max_t);
  if (max_v <= -1e-10 * scale) {
    r.applies = true;
    r.orbit_bound = 4;
    r.hyperbolic_guarantee = false;
  }
  return r;
}

std::vector<CriterionReport> evaluate_criteria(const AbelEquation& eq) {
  std::vector<CriterionReport> reports;
  const bool c_zero = eq.c_is_zero();

  if (c_zero) {
    // Sign-definite combination (with exact feasibility on the closed
    // families).
    CriterionReport r;
    r.criterion = "sign_definite_combination";
    const auto w = witness_search(eq);
    if (w) {
      r = unique_orbit_report(eq, "sign_definite_combination", *w);
    } else {
      r = not_applicable("sign_definite_combination",
                         "no sign-definite combination of A and B exists (or "
                         "none was found at this resolution)");
    }
    reports.push_back(std::move(r));

    // No-orbit refinement for the degree-1 trig family.
    const auto ta = as_trig1(eq.A);
    const auto tb = as_trig1(eq.B);
    if (ta && tb &&
        trig_no_orbit_test(ta->c0, ta->c1, ta->s1, tb->c0, tb->c1, tb->s1)) {
      CriterionReport r2;
      r2.criterion = "trig_no_orbit";
      r2.applies = true;
      r2.orbit_bound = 0;
      r2.witness = reports.front().witness;
      r2.sign_evidence = reports.front().sign_evidence;
      r2.notes = "every non-zero m gives a contact-free line x = -1/m";
      reports.push_back(std::move(r2));
    }

    // Matched-endpoints case of the three-monomial family.
    if (const auto jk = common_poly_exponents(eq)) {
      const auto pa = as_poly3(eq.A, jk->first, jk->second);
      const auto pb = as_poly3(eq.B, jk->first, jk->second);
      if (pa && pb) {
        CriterionReport r3 = matched_endpoints_criterion(
            (*pa)[0], (*pa)[1], (*pa)[2], (*pb)[0], (*pb)[1], (*pb)[2],
            jk->first, jk->second);
        if (r3.applies) reports.push_back(std::move(r3));
      }
    }
  } else {
    reports.push_back(zero_mean_c_criterion(eq));
  }
  return reports;
}

}  // namespace abel
