#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "abel/coeffs.hpp"

namespace abel {

inline constexpr double kEscapeBound = 1e6;
inline constexpr int kDenseNodes = 201;

enum class TerminalKind { Completed, Escaped };

/// One initial-value solve on [0,1] with dense output on a uniform grid.
/// Escaped trajectories carry the crossing time of |x| = escape bound;
/// solutions of the cubic right-hand side can blow up before t = 1, so
/// escape is an expected outcome, not an error.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  TerminalKind terminal = TerminalKind::Completed;
  double x1 = 0.0;           // value at t = 1 when Completed
  double escape_time = 0.0;  // when Escaped
  int escape_sign = 0;       // sign of x at escape

  bool completed() const { return terminal == TerminalKind::Completed; }
};

/// Step-size underflow away from the escape regime; carries the last
/// valid state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, double x)
      : std::runtime_error(what), t_last(t), x_last(x) {}
  double t_last;
  double x_last;
};

struct VariationalResult {
  double x1 = 0.0;                   // solution at t = 1
  double v1 = 1.0;                   // derivative of the t=0 -> t=1 map
  double divergence_integral = 0.0;  // int_0^1 dh/dx(t, x(t)) dt
};

/// Adaptive embedded Runge-Kutta 4(5) (Dormand-Prince) with PI step
/// control. Tolerances must lie in [1e-14, 1e-3].
Trajectory solve_ivp(const AbelEquation& eq, double x0, double rel_tol = 1e-10,
                     double abs_tol = 1e-10);

/// Co-integrates the variational equation v' = dh/dx(t, x(t)) v, v(0)=1,
/// and the divergence integral. Throws std::domain_error when the
/// trajectory escapes before t = 1.
VariationalResult solve_with_variation(const AbelEquation& eq, double x0,
                                       double rel_tol = 1e-10,
                                       double abs_tol = 1e-10);

namespace detail {

/// Fixed-capacity state vector for the small augmented systems.
struct StateVec {
  double v[4] = {0, 0, 0, 0};
  int n = 1;
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

}  // namespace detail

/// Integrates a small ODE system over [0,1] with the same stepper (no
/// escape handling); used for nested quadratures. Returns the final state.
detail::StateVec integrate_system(
    const std::function<void(double, const detail::StateVec&, detail::StateVec&)>& rhs,
    detail::StateVec y0, double rel_tol, double abs_tol);

}  // namespace abel
