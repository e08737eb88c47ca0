#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace abel {

inline constexpr double kTwoPi = 6.28318530717958647692528676656;

/// Trigonometric polynomial c0 + sum_n cos_coeffs[n-1]*cos(2*pi*n*t)
///                             + sum_n sin_coeffs[n-1]*sin(2*pi*n*t).
/// 1-periodic in t by construction.
struct TrigPoly {
  double c0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  TrigPoly() = default;
  TrigPoly(double c0_, std::vector<double> cosc, std::vector<double> sinc)
      : c0(c0_), cos_coeffs(std::move(cosc)), sin_coeffs(std::move(sinc)) {}

  int degree() const;
  double value(double t) const;
  double derivative(double t) const;
  // Antiderivative F with F(0) = 0.
  double primitive(double t) const;
  double coefficient_scale() const;

  bool operator==(const TrigPoly&) const = default;
};

/// Sparse polynomial sum_i coeff_i * t^exp_i with strictly increasing
/// non-negative integer exponents.
struct MonomialPoly {
  struct Term {
    int exponent = 0;
    double coefficient = 0.0;
    bool operator==(const Term&) const = default;
  };
  std::vector<Term> terms;

  MonomialPoly() = default;
  // Sorts by exponent and merges duplicates; throws on negative exponents.
  static MonomialPoly from_terms(std::vector<Term> terms);

  double value(double t) const;
  double derivative(double t) const;
  double primitive(double t) const;
  double coefficient_scale() const;

  bool operator==(const MonomialPoly&) const = default;
};

/// Uniformly sampled function on [0,1] with local cubic interpolation.
struct SampledFunction {
  std::vector<double> values;  // node i at t = i/(size-1), size >= 8

  SampledFunction() = default;
  explicit SampledFunction(std::vector<double> vals);

  template <class Fn>
  static SampledFunction from_function(Fn&& fn, int n_nodes) {
    std::vector<double> v(static_cast<size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i)
      v[static_cast<size_t>(i)] = fn(static_cast<double>(i) / (n_nodes - 1));
    return SampledFunction(std::move(v));
  }

  double value(double t) const;
  double derivative(double t) const;
  double coefficient_scale() const;

  bool operator==(const SampledFunction&) const = default;
};

/// Scalar coefficient function of t on [0,1]: one of the closed-form
/// families or a sampled table.
class CoefficientFunction {
 public:
  using Storage = std::variant<TrigPoly, MonomialPoly, SampledFunction>;

  CoefficientFunction() : storage_(TrigPoly{}) {}  // zero function
  CoefficientFunction(TrigPoly p) : storage_(std::move(p)) {}
  CoefficientFunction(MonomialPoly p) : storage_(std::move(p)) {}
  CoefficientFunction(SampledFunction s) : storage_(std::move(s)) {}

  static CoefficientFunction zero() { return CoefficientFunction(); }
  static CoefficientFunction constant(double c) {
    return CoefficientFunction(TrigPoly{c, {}, {}});
  }

  const Storage& storage() const { return storage_; }
  bool is_trig() const { return std::holds_alternative<TrigPoly>(storage_); }
  bool is_poly() const { return std::holds_alternative<MonomialPoly>(storage_); }
  bool is_sampled() const { return std::holds_alternative<SampledFunction>(storage_); }
  const TrigPoly& trig() const { return std::get<TrigPoly>(storage_); }
  const MonomialPoly& poly() const { return std::get<MonomialPoly>(storage_); }
  const SampledFunction& sampled() const { return std::get<SampledFunction>(storage_); }

  /// Evaluate at t in [0,1] (a small roundoff slack is tolerated).
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  double derivative_at(double t) const;
  double coefficient_scale() const;

  bool operator==(const CoefficientFunction&) const = default;

 private:
  Storage storage_;
};

/// Exact definite integral over [t0,t1] within [0,1]: closed-form
/// antiderivatives for the trig/monomial variants, adaptive quadrature
/// (tol 1e-12) of the interpolant for sampled tables.
double integrate_exact(const CoefficientFunction& f, double t0, double t1);

/// a*f + b*g. Matching variants combine exactly; mixed variants are
/// promoted to a sampled table.
CoefficientFunction linear_combination(double a, const CoefficientFunction& f,
                                       double b, const CoefficientFunction& g);

/// True when every coefficient (or sample) vanishes to within
/// rel_tol * coefficient scale.
bool is_identically_zero(const CoefficientFunction& f, double rel_tol = 1e-14);

enum class SignVerdict { IdenticallyZero, NonNegative, NonPositive, ChangesSign };

struct SignSample {
  double t = 0.0;
  double value = 0.0;
};

struct SignClass {
  SignVerdict verdict = SignVerdict::IdenticallyZero;
  bool certified_exact = false;  // closed-form certificate vs grid evidence
  double min_value = 0.0, min_t = 0.0;
  double max_value = 0.0, max_t = 0.0;
  double scale = 1.0;
  std::vector<SignSample> evidence;

  bool sign_definite() const {
    return verdict == SignVerdict::NonNegative || verdict == SignVerdict::NonPositive;
  }
};

/// Sign analysis of f on [0,1]. Exact verdicts for degree-1 trig
/// polynomials and monomial sums with at most three terms; grid sampling
/// with bisection refinement otherwise.
SignClass sign_range(const CoefficientFunction& f, int grid_size = 1024,
                     double tol = 1e-12);

/// Same analysis for an arbitrary callable (used for derived expressions
/// that have no closed coefficient form). Always grid-certified.
SignClass sign_range_of(const std::vector<double>& grid_values,
                        const std::vector<double>& grid_times, double scale,
                        double tol);

const char* to_string(SignVerdict v);

/// The equation  dx/dt = A(t) x^3 + B(t) x^2 + C(t) x  on [0,1] x R.
struct AbelEquation {
  CoefficientFunction A;
  CoefficientFunction B;
  CoefficientFunction C;  // defaults to the zero function

  AbelEquation() = default;
  AbelEquation(CoefficientFunction a, CoefficientFunction b,
               CoefficientFunction c = CoefficientFunction::zero())
      : A(std::move(a)), B(std::move(b)), C(std::move(c)) {}

  double rhs(double t, double x) const {
    return ((A.eval(t) * x + B.eval(t)) * x + C.eval(t)) * x;
  }
  double rhs_dx(double t, double x) const {
    return (3.0 * A.eval(t) * x + 2.0 * B.eval(t)) * x + C.eval(t);
  }

  bool c_is_zero() const { return is_identically_zero(C); }

  bool operator==(const AbelEquation&) const = default;
};

/// Trig coefficients (c0, cos1, sin1) of a degree<=1 trig polynomial.
struct Trig1 {
  double c0 = 0, c1 = 0, s1 = 0;
};

/// Returns the degree-1 view of f when it is a TrigPoly of degree <= 1.
std::optional<Trig1> as_trig1(const CoefficientFunction& f);

/// Three-monomial view a0 + a1 t^j + a2 t^k of f (missing exponents read
/// as zero coefficients). j,k must be the caller's exponent pair.
std::optional<std::array<double, 3>> as_poly3(const CoefficientFunction& f,
                                              int j, int k);

/// Least exponent pair (j,k), 0<j<k, covering the non-constant exponents
/// of both A and B when both are monomial sums; nullopt otherwise.
std::optional<std::pair<int, int>> common_poly_exponents(const AbelEquation& eq);

}  // namespace abel
