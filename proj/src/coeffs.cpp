#include "abel/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace abel {
namespace {

constexpr double kDomainSlack = 1e-9;

double clamp_domain(double t, const char* who) {
  if (t < -kDomainSlack || t > 1.0 + kDomainSlack)
    throw std::domain_error(std::string(who) + ": t = " + std::to_string(t) +
                            " outside [0,1]");
  return std::clamp(t, 0.0, 1.0);
}

// Adaptive Simpson with an absolute tolerance budget.
double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = (left + right - whole) / 15.0;
  if (depth <= 0 || std::abs(err) <= tol) return left + right + err;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

// ---------------------------------------------------------------------------
// TrigPoly

int TrigPoly::degree() const {
  int d = 0;
  for (size_t i = 0; i < cos_coeffs.size(); ++i)
    if (cos_coeffs[i] != 0.0) d = std::max(d, static_cast<int>(i) + 1);
  for (size_t i = 0; i < sin_coeffs.size(); ++i)
    if (sin_coeffs[i] != 0.0) d = std::max(d, static_cast<int>(i) + 1);
  return d;
}

double TrigPoly::value(double t) const {
  double s = c0;
  const size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (size_t i = 0; i < n; ++i) {
    const double arg = kTwoPi * static_cast<double>(i + 1) * t;
    if (i < cos_coeffs.size() && cos_coeffs[i] != 0.0)
      s += cos_coeffs[i] * std::cos(arg);
    if (i < sin_coeffs.size() && sin_coeffs[i] != 0.0)
      s += sin_coeffs[i] * std::sin(arg);
  }
  return s;
}

double TrigPoly::derivative(double t) const {
  double s = 0.0;
  const size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (size_t i = 0; i < n; ++i) {
    const double w = kTwoPi * static_cast<double>(i + 1);
    const double arg = w * t;
    if (i < cos_coeffs.size() && cos_coeffs[i] != 0.0)
      s -= cos_coeffs[i] * w * std::sin(arg);
    if (i < sin_coeffs.size() && sin_coeffs[i] != 0.0)
      s += sin_coeffs[i] * w * std::cos(arg);
  }
  return s;
}

double TrigPoly::primitive(double t) const {
  double s = c0 * t;
  const size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (size_t i = 0; i < n; ++i) {
    const double w = kTwoPi * static_cast<double>(i + 1);
    const double arg = w * t;
    if (i < cos_coeffs.size() && cos_coeffs[i] != 0.0)
      s += cos_coeffs[i] * std::sin(arg) / w;
    if (i < sin_coeffs.size() && sin_coeffs[i] != 0.0)
      s += sin_coeffs[i] * (1.0 - std::cos(arg)) / w;
  }
  return s;
}

double TrigPoly::coefficient_scale() const {
  double s = std::abs(c0);
  for (double c : cos_coeffs) s += std::abs(c);
  for (double c : sin_coeffs) s += std::abs(c);
  return s;
}

// ---------------------------------------------------------------------------
// MonomialPoly

MonomialPoly MonomialPoly::from_terms(std::vector<Term> in) {
  for (const Term& t : in)
    if (t.exponent < 0)
      throw std::invalid_argument("MonomialPoly: negative exponent");
  std::sort(in.begin(), in.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  MonomialPoly p;
  for (const Term& t : in) {
    if (!p.terms.empty() && p.terms.back().exponent == t.exponent)
      p.terms.back().coefficient += t.coefficient;
    else
      p.terms.push_back(t);
  }
  return p;
}

double MonomialPoly::value(double t) const {
  double s = 0.0;
  for (const Term& term : terms)
    s += term.coefficient * std::pow(t, term.exponent);
  return s;
}

double MonomialPoly::derivative(double t) const {
  double s = 0.0;
  for (const Term& term : terms) {
    if (term.exponent == 0) continue;
    s += term.coefficient * term.exponent * std::pow(t, term.exponent - 1);
  }
  return s;
}

double MonomialPoly::primitive(double t) const {
  double s = 0.0;
  for (const Term& term : terms)
    s += term.coefficient / (term.exponent + 1) * std::pow(t, term.exponent + 1);
  return s;
}

double MonomialPoly::coefficient_scale() const {
  double s = 0.0;
  for (const Term& term : terms) s += std::abs(term.coefficient);
  return s;
}

// ---------------------------------------------------------------------------
// SampledFunction

SampledFunction::SampledFunction(std::vector<double> vals) : values(std::move(vals)) {
  if (values.size() < 8)
    throw std::invalid_argument("SampledFunction: needs at least 8 nodes");
}

namespace {

// Four-point Lagrange interpolation on a uniform grid; the stencil is
// shifted at the boundaries.
struct CubicCell {
  int i0;       // first stencil index
  double u;     // local coordinate relative to node i0, in units of h
};

CubicCell locate(double t, size_t n) {
  const double h = 1.0 / static_cast<double>(n - 1);
  int cell = static_cast<int>(t / h);
  cell = std::clamp(cell, 0, static_cast<int>(n) - 2);
  int i0 = std::clamp(cell - 1, 0, static_cast<int>(n) - 4);
  return {i0, t / h - i0};
}

}  // namespace

double SampledFunction::value(double t) const {
  t = clamp_domain(t, "SampledFunction::value");
  const auto [i0, u] = locate(t, values.size());
  const double y0 = values[i0], y1 = values[i0 + 1], y2 = values[i0 + 2],
               y3 = values[i0 + 3];
  // Lagrange basis at nodes u = 0,1,2,3.
  const double l0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
  const double l1 = u * (u - 2) * (u - 3) / 2.0;
  const double l2 = -u * (u - 1) * (u - 3) / 2.0;
  const double l3 = u * (u - 1) * (u - 2) / 6.0;
  return y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3;
}

double SampledFunction::derivative(double t) const {
  t = clamp_domain(t, "SampledFunction::derivative");
  const size_t n = values.size();
  const double h = 1.0 / static_cast<double>(n - 1);
  const auto [i0, u] = locate(t, n);
  const double y0 = values[i0], y1 = values[i0 + 1], y2 = values[i0 + 2],
               y3 = values[i0 + 3];
  const double d0 = -((u - 1) * (u - 2) + (u - 1) * (u - 3) + (u - 2) * (u - 3)) / 6.0;
  const double d1 = ((u) * (u - 2) + (u) * (u - 3) + (u - 2) * (u - 3)) / 2.0;
  const double d2 = -((u) * (u - 1) + (u) * (u - 3) + (u - 1) * (u - 3)) / 2.0;
  const double d3 = ((u) * (u - 1) + (u) * (u - 2) + (u - 1) * (u - 2)) / 6.0;
  return (y0 * d0 + y1 * d1 + y2 * d2 + y3 * d3) / h;
}

double SampledFunction::coefficient_scale() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

// ---------------------------------------------------------------------------
// CoefficientFunction

double CoefficientFunction::eval(double t) const {
  t = clamp_domain(t, "CoefficientFunction::eval");
  return std::visit([t](const auto& f) { return f.value(t); }, storage_);
}

double CoefficientFunction::derivative_at(double t) const {
  t = clamp_domain(t, "CoefficientFunction::derivative_at");
  return std::visit([t](const auto& f) { return f.derivative(t); }, storage_);
}

double CoefficientFunction::coefficient_scale() const {
  return std::visit([](const auto& f) { return f.coefficient_scale(); }, storage_);
}

double integrate_exact(const CoefficientFunction& f, double t0, double t1) {
  t0 = clamp_domain(t0, "integrate_exact");
  t1 = clamp_domain(t1, "integrate_exact");
  if (f.is_trig()) return f.trig().primitive(t1) - f.trig().primitive(t0);
  if (f.is_poly()) return f.poly().primitive(t1) - f.poly().primitive(t0);
  const SampledFunction& s = f.sampled();
  return adaptive_simpson([&s](double t) { return s.value(t); }, t0, t1, 1e-12);
}

bool is_identically_zero(const CoefficientFunction& f, double rel_tol) {
  const double scale = f.coefficient_scale();
  return scale <= rel_tol * std::max(1.0, scale) || scale == 0.0;
}

CoefficientFunction linear_combination(double a, const CoefficientFunction& f,
                                       double b, const CoefficientFunction& g) {
  if (f.is_trig() && g.is_trig()) {
    const TrigPoly& p = f.trig();
    const TrigPoly& q = g.trig();
    TrigPoly r;
    r.c0 = a * p.c0 + b * q.c0;
    const size_t nc = std::max(p.cos_coeffs.size(), q.cos_coeffs.size());
    const size_t ns = std::max(p.sin_coeffs.size(), q.sin_coeffs.size());
    r.cos_coeffs.resize(nc, 0.0);
    r.sin_coeffs.resize(ns, 0.0);
    for (size_t i = 0; i < nc; ++i)
      r.cos_coeffs[i] = a * (i < p.cos_coeffs.size() ? p.cos_coeffs[i] : 0.0) +
                        b * (i < q.cos_coeffs.size() ? q.cos_coeffs[i] : 0.0);
    for (size_t i = 0; i < ns; ++i)
      r.sin_coeffs[i] = a * (i < p.sin_coeffs.size() ? p.sin_coeffs[i] : 0.0) +
                        b * (i < q.sin_coeffs.size() ? q.sin_coeffs[i] : 0.0);
    return CoefficientFunction(std::move(r));
  }
  if (f.is_poly() && g.is_poly()) {
    std::vector<MonomialPoly::Term> terms;
    for (const auto& t : f.poly().terms) terms.push_back({t.exponent, a * t.coefficient});
    for (const auto& t : g.poly().terms) terms.push_back({t.exponent, b * t.coefficient});
    return CoefficientFunction(MonomialPoly::from_terms(std::move(terms)));
  }
  // Mixed variants: promote to a sampled table.
  constexpr int kPromotionNodes = 1025;
  return CoefficientFunction(SampledFunction::from_function(
      [&](double t) { return a * f.eval(t) + b * g.eval(t); }, kPromotionNodes));
}

// ---------------------------------------------------------------------------
// Sign analysis

const char* to_string(SignVerdict v) {
  switch (v) {
    case SignVerdict::IdenticallyZero: return "identically_zero";
    case SignVerdict::NonNegative: return "non_negative";
    case SignVerdict::NonPositive: return "non_positive";
    case SignVerdict::ChangesSign: return "changes_sign";
  }
  return "?";
}

namespace {

SignClass classify_from_extrema(double min_v, double min_t, double max_v,
                                double max_t, double scale, double tol,
                                bool exact) {
  SignClass out;
  out.certified_exact = exact;
  out.scale = std::max(1.0, scale);
  out.min_value = min_v;
  out.min_t = min_t;
  out.max_value = max_v;
  out.max_t = max_t;
  const double eps = tol * out.scale;
  if (std::abs(min_v) <= eps && std::abs(max_v) <= eps)
    out.verdict = SignVerdict::IdenticallyZero;
  else if (min_v >= -eps)
    out.verdict = SignVerdict::NonNegative;
  else if (max_v <= eps)
    out.verdict = SignVerdict::NonPositive;
  else
    out.verdict = SignVerdict::ChangesSign;
  out.evidence.push_back({min_t, min_v});
  out.evidence.push_back({max_t, max_v});
  return out;
}

}  // namespace

SignClass sign_range_of(const std::vector<double>& grid_values,
                        const std::vector<double>& grid_times, double scale,
                        double tol) {
  double min_v = grid_values[0], max_v = grid_values[0];
  double min_t = grid_times[0], max_t = grid_times[0];
  for (size_t i = 1; i < grid_values.size(); ++i) {
    if (grid_values[i] < min_v) { min_v = grid_values[i]; min_t = grid_times[i]; }
    if (grid_values[i] > max_v) { max_v = grid_values[i]; max_t = grid_times[i]; }
  }
  return classify_from_extrema(min_v, min_t, max_v, max_t, scale, tol, false);
}

SignClass sign_range(const CoefficientFunction& f, int grid_size, double tol) {
  if (grid_size < 64) throw std::invalid_argument("sign_range: grid_size < 64");
  const double scale = f.coefficient_scale();

  // Certified path 1: trig polynomial of degree <= 1 via the amplitude bound.
  if (auto t1 = as_trig1(f)) {
    const double amp = std::hypot(t1->c1, t1->s1);
    const double phase = std::atan2(t1->s1, t1->c1);
    double tmax = phase / kTwoPi;
    if (tmax < 0.0) tmax += 1.0;
    double tmin = tmax + 0.5 > 1.0 ? tmax - 0.5 : tmax + 0.5;
    if (amp == 0.0) { tmax = 0.0; tmin = 0.5; }
    return classify_from_extrema(t1->c0 - amp, tmin, t1->c0 + amp, tmax, scale,
                                 tol, true);
  }

  // Certified path 2: monomial sums of at most three terms whose
  // derivative has at most two terms (the constant + two powers family).
  // The interior critical points then have a closed form and exact
  // extrema follow.
  const auto nonconstant_terms = [](const MonomialPoly& p) {
    size_t n = 0;
    for (const auto& t : p.terms)
      if (t.exponent >= 1 && t.coefficient != 0.0) ++n;
    return n;
  };
  if (f.is_poly() && f.poly().terms.size() <= 3 &&
      nonconstant_terms(f.poly()) <= 2) {
    const MonomialPoly& p = f.poly();
    auto value = [&p](double x) { return p.value(x); };
    double min_v = std::min(value(0.0), value(1.0));
    double min_t = value(0.0) <= value(1.0) ? 0.0 : 1.0;
    double max_v = std::max(value(0.0), value(1.0));
    double max_t = value(0.0) >= value(1.0) ? 0.0 : 1.0;
    std::vector<std::pair<int, double>> dterms;  // (exponent, coefficient) of f'
    for (const auto& t : p.terms)
      if (t.exponent >= 1 && t.coefficient != 0.0)
        dterms.push_back({t.exponent - 1, t.exponent * t.coefficient});
    if (dterms.size() == 2) {
      const auto& lo = dterms[0];  // exponents ascend with the terms
      const auto& hi = dterms[1];
      const double r = -lo.second / hi.second;
      if (r > 0.0) {
        const double tc = std::pow(r, 1.0 / static_cast<double>(hi.first - lo.first));
        if (tc > 0.0 && tc < 1.0) {
          const double vc = value(tc);
          if (vc < min_v) { min_v = vc; min_t = tc; }
          if (vc > max_v) { max_v = vc; max_t = tc; }
        }
      }
    }
    return classify_from_extrema(min_v, min_t, max_v, max_t, scale, tol, true);
  }

  // Generic path: uniform grid plus bisection refinement near candidate
  // sign changes ("grid-certified").
  std::vector<double> ts(static_cast<size_t>(grid_size));
  std::vector<double> vs(static_cast<size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    ts[i] = static_cast<double>(i) / (grid_size - 1);
    vs[i] = f.eval(ts[i]);
  }
  SignClass out = sign_range_of(vs, ts, scale, tol);
  if (out.verdict == SignVerdict::NonNegative ||
      out.verdict == SignVerdict::NonPositive) {
    // Refine local minima of |f| by golden-section to harden the verdict.
    const double want = out.verdict == SignVerdict::NonNegative ? 1.0 : -1.0;
    for (int i = 1; i + 1 < grid_size; ++i) {
      const double a = want * vs[i];
      if (a <= want * vs[i - 1] && a <= want * vs[i + 1]) {
        double lo = ts[i - 1], hi = ts[i + 1];
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
          const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
          if (want * f.eval(m1) < want * f.eval(m2)) hi = m2; else lo = m1;
        }
        const double tm = 0.5 * (lo + hi), vm = f.eval(tm);
        if (vm < out.min_value) { out.min_value = vm; out.min_t = tm; }
        if (vm > out.max_value) { out.max_value = vm; out.max_t = tm; }
      }
    }
    const double eps = tol * out.scale;
    if (out.min_value < -eps && out.max_value > eps)
      out.verdict = SignVerdict::ChangesSign;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family views

std::optional<Trig1> as_trig1(const CoefficientFunction& f) {
  if (!f.is_trig()) return std::nullopt;
  const TrigPoly& p = f.trig();
  if (p.degree() > 1) return std::nullopt;
  Trig1 out;
  out.c0 = p.c0;
  out.c1 = p.cos_coeffs.empty() ? 0.0 : p.cos_coeffs[0];
  out.s1 = p.sin_coeffs.empty() ? 0.0 : p.sin_coeffs[0];
  return out;
}

std::optional<std::array<double, 3>> as_poly3(const CoefficientFunction& f,
                                              int j, int k) {
  if (!f.is_poly()) return std::nullopt;
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (const auto& t : f.poly().terms) {
    if (t.coefficient == 0.0) continue;
    if (t.exponent == 0) out[0] = t.coefficient;
    else if (t.exponent == j) out[1] = t.coefficient;
    else if (t.exponent == k) out[2] = t.coefficient;
    else return std::nullopt;
  }
  return out;
}

std::optional<std::pair<int, int>> common_poly_exponents(const AbelEquation& eq) {
  if (!eq.A.is_poly() || !eq.B.is_poly()) return std::nullopt;
  std::vector<int> exps;
  for (const auto& t : eq.A.poly().terms)
    if (t.exponent > 0 && t.coefficient != 0.0) exps.push_back(t.exponent);
  for (const auto& t : eq.B.poly().terms)
    if (t.exponent > 0 && t.coefficient != 0.0) exps.push_back(t.exponent);
  std::sort(exps.begin(), exps.end());
  exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
  if (exps.size() > 2) return std::nullopt;
  int j = exps.size() > 0 ? exps[0] : 1;
  int k = exps.size() > 1 ? exps[1] : j + 1;
  return std::make_pair(j, k);
}

}  // namespace abel
