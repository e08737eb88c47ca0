#include "abel/lyapunov.hpp"

#include <cmath>

#include "abel/integrate.hpp"

namespace abel {
namespace {

double scaled_zero_tol(const AbelEquation& eq) {
  return 1e-12 * std::max(1.0, eq.A.coefficient_scale() + eq.B.coefficient_scale());
}

CenterVerdict generic_verdict(const LyapunovConstants& c) {
  if (!c.v2_zero() || !c.v3_zero() || !c.v4_zero()) return CenterVerdict::NotCenter;
  return CenterVerdict::Undecidable;
}

}  // namespace

LyapunovConstants lyapunov_constants_quadrature(const AbelEquation& eq) {
  if (!eq.c_is_zero())
    throw std::invalid_argument("lyapunov_constants: C must vanish identically");
  LyapunovConstants out;
  out.method = LyapunovMethod::Quadrature;
  out.zero_tol = scaled_zero_tol(eq);
  out.v2 = integrate_exact(eq.B, 0.0, 1.0);
  out.v3 = integrate_exact(eq.A, 0.0, 1.0);
  // V4 as one augmented quadrature: u' = B, w' = A u.
  detail::StateVec y0;
  y0.n = 2;
  const detail::StateVec yf = integrate_system(
      [&eq](double t, const detail::StateVec& y, detail::StateVec& d) {
        d[0] = eq.B.eval(t);
        d[1] = eq.A.eval(t) * y[0];
      },
      y0, 1e-12, 1e-13);
  out.v4 = yf[1];
  out.center_verdict = generic_verdict(out);
  return out;
}

LyapunovConstants lyapunov_constants(const AbelEquation& eq) {
  if (!eq.c_is_zero())
    throw std::invalid_argument("lyapunov_constants: C must vanish identically");

  const auto ta = as_trig1(eq.A);
  const auto tb = as_trig1(eq.B);
  if (ta && tb) {
    LyapunovConstants out;
    out.method = LyapunovMethod::ClosedFormTrig1;
    out.zero_tol = scaled_zero_tol(eq);
    out.v2 = tb->c0;
    out.v3 = ta->c0;
    out.v4 = (ta->s1 * tb->c1 - ta->c1 * tb->s1) / (2.0 * kTwoPi);
    out.center_verdict =
        center_test_trig1(ta->c0, ta->c1, ta->s1, tb->c0, tb->c1, tb->s1)
            ? CenterVerdict::Center
            : CenterVerdict::NotCenter;
    return out;
  }

  if (const auto jk = common_poly_exponents(eq)) {
    const auto [j, k] = *jk;
    const auto pa = as_poly3(eq.A, j, k);
    const auto pb = as_poly3(eq.B, j, k);
    if (pa && pb) {
      const auto& a = *pa;
      const auto& b = *pb;
      LyapunovConstants out;
      out.method = LyapunovMethod::ClosedFormPoly3;
      out.zero_tol = scaled_zero_tol(eq);
      out.v2 = b[0] + b[1] / (j + 1) + b[2] / (k + 1);
      out.v3 = a[0] + a[1] / (j + 1) + a[2] / (k + 1);
      out.v4 = static_cast<double>(j) * k * (k - j) * (a[2] * b[1] - a[1] * b[2]) /
               (2.0 * (1 + j) * (2 + j) * (1 + k) * (2 + k) * (2 + j + k));
      out.center_verdict =
          center_test_poly3(a[0], a[1], a[2], b[0], b[1], b[2], j, k)
              ? CenterVerdict::Center
              : CenterVerdict::NotCenter;
      return out;
    }
  }

  return lyapunov_constants_quadrature(eq);
}

bool center_test_trig1(double a0, double a1, double a2, double b0, double b1,
                       double b2) {
  const double scale =
      std::max(1.0, std::abs(a0) + std::abs(a1) + std::abs(a2) + std::abs(b0) +
                        std::abs(b1) + std::abs(b2));
  const double tol = 1e-12 * scale;
  return std::abs(a0) <= tol && std::abs(b0) <= tol &&
         std::abs(a2 * b1 - a1 * b2) <= tol * scale;
}

bool center_test_poly3(double a0, double a1, double a2, double b0, double b1,
                       double b2, int j, int k) {
  if (!(0 < j && j < k))
    throw std::invalid_argument("center_test_poly3: need 0 < j < k");
  const double scale =
      std::max(1.0, std::abs(a0) + std::abs(a1) + std::abs(a2) + std::abs(b0) +
                        std::abs(b1) + std::abs(b2));
  const double tol = 1e-12 * scale;
  return std::abs(a0 + a1 / (j + 1) + a2 / (k + 1)) <= tol &&
         std::abs(b0 + b1 / (j + 1) + b2 / (k + 1)) <= tol &&
         std::abs(a2 * b1 - a1 * b2) <= tol * scale;
}

namespace {

void check_designer_ordering(double v4, double mu, double lambda) {
  if (mu == 0.0 && lambda == 0.0) return;  // unperturbed case
  if (!(v4 > 0.0))
    throw std::invalid_argument("two-orbit designer: v4 target must be positive");
  if (!(lambda > 0.0 && lambda <= mu / 100.0 && mu <= v4 / 100.0))
    throw std::invalid_argument(
        "two-orbit designer: need 0 < lambda <= mu/100 and mu <= v4/100");
}

}  // namespace

AbelEquation design_two_orbit_trig(double v4_target, double mu, double lambda) {
  check_designer_ordering(v4_target, mu, lambda);
  // Canonical gauge a1 = b2 = 0, b1 = 1, so a2 = 4*pi*v4 fixes V4.
  TrigPoly A{-mu, {0.0}, {2.0 * kTwoPi * v4_target}};
  TrigPoly B{lambda, {1.0}, {0.0}};
  return AbelEquation(CoefficientFunction(A), CoefficientFunction(B));
}

AbelEquation design_two_orbit_poly(int j, int k, double v4_scale, double mu,
                                   double lambda) {
  if (!(0 < j && j < k))
    throw std::invalid_argument("design_two_orbit_poly: need 0 < j < k");
  check_designer_ordering(v4_scale, mu, lambda);
  // Canonical gauge a1 = b2 = 0, b1 = 1.
  const double denom = static_cast<double>(j) * k * (k - j);
  const double a2 =
      v4_scale * 2.0 * (1 + j) * (2 + j) * (1 + k) * (2 + k) * (2 + j + k) / denom;
  const double a0 = -a2 / (k + 1) - mu;
  const double b0 = -1.0 / (j + 1) + lambda;
  MonomialPoly A = MonomialPoly::from_terms({{0, a0}, {k, a2}});
  MonomialPoly B = MonomialPoly::from_terms({{0, b0}, {j, 1.0}});
  return AbelEquation(CoefficientFunction(A), CoefficientFunction(B));
}

BifurcationPrediction predict_bifurcation_roots(double v4, double mu,
                                                double lambda) {
  BifurcationPrediction out;
  if (v4 <= 0.0) return out;
  const double disc = mu * mu - 4.0 * lambda * v4;
  if (disc <= 0.0) return out;
  const double s = std::sqrt(disc);
  out.orbits_exist = true;
  out.x_inner = (mu - s) / (2.0 * v4);
  out.x_outer = (mu + s) / (2.0 * v4);
  // d(x) ~ x^2 (lambda - mu x + v4 x^2); at a simple root the multiplier
  // offset is x^2 q'(x) = +- x^2 sqrt(disc).
  out.gap_inner = out.x_inner * out.x_inner * s;
  out.gap_outer = out.x_outer * out.x_outer * s;
  return out;
}

}  // namespace abel
