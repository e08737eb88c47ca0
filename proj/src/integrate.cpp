#include "abel/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace abel {
namespace {

using detail::StateVec;

// Dormand-Prince 5(4) tableau.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

constexpr double kMinStep = 1e-14;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
// PI controller exponents for a 5th order error estimate.
constexpr double kAlpha = 0.7 / 5.0;
constexpr double kBeta = 0.4 / 5.0;
constexpr long kMaxSteps = 20'000'000;

// Observation hook invoked after every accepted step with the Hermite
// data of the step just taken.
struct StepObserver {
  virtual void accepted(double t0, const StateVec& y0, const StateVec& f0,
                        double t1, const StateVec& y1, const StateVec& f1) = 0;
  virtual ~StepObserver() = default;
};

struct DriveResult {
  StateVec y;
  double t = 0.0;
  bool escaped = false;
  double escape_time = 0.0;
  int escape_sign = 0;
};

// Cubic Hermite evaluation of component `comp` inside an accepted step.
double hermite(double t0, const StateVec& y0, const StateVec& f0, double t1,
               const StateVec& y1, const StateVec& f1, int comp, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y0[comp] + h10 * h * f0[comp] + h01 * y1[comp] + h11 * h * f1[comp];
}

template <class RHS>
DriveResult drive(RHS&& rhs, StateVec y0, double rel_tol, double abs_tol,
                  double escape_bound, StepObserver* obs) {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-3) ||
      !(abs_tol >= 1e-14 && abs_tol <= 1e-3))
    throw std::invalid_argument("tolerances must lie in [1e-14, 1e-3]");

  const int n = y0.n;
  DriveResult out;
  out.y = y0;
  out.t = 0.0;

  if (escape_bound > 0.0 && std::abs(y0[0]) > escape_bound) {
    out.escaped = true;
    out.escape_time = 0.0;
    out.escape_sign = y0[0] > 0 ? 1 : -1;
    return out;
  }

  StateVec k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, yerr;
  k1.n = k2.n = k3.n = k4.n = k5.n = k6.n = k7.n = ytmp.n = ynew.n = yerr.n = n;

  double t = 0.0;
  StateVec y = y0;
  rhs(t, y, k1);
  double h = 1e-3;
  double err_prev = 1.0;
  bool have_prev = false;

  for (long step = 0; step < kMaxSteps; ++step) {
    if (t >= 1.0) break;
    h = std::min(h, 1.0 - t);
    bool finite = true;

    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * kA21 * k1[i];
    rhs(t + kC2 * h, ytmp, k2);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    rhs(t + kC3 * h, ytmp, k3);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs(t + kC4 * h, ytmp, k4);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    rhs(t + kC5 * h, ytmp, k5);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                            kA64 * k4[i] + kA65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (int i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                            kB5 * k5[i] + kB6 * k6[i]);
    rhs(t + h, ynew, k7);  // FSAL stage

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                            kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
      const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = e / sc;
      err += r * r;
      if (!std::isfinite(ynew[i])) finite = false;
    }
    err = std::sqrt(err / n);

    if (!finite || !(err <= 1.0)) {  // rejected
      double fac = finite ? kSafety * std::pow(err, -0.2) : 0.1;
      fac = std::max(kFacMin, std::min(1.0, fac));
      h *= fac;
      if (h < kMinStep) {
        // Stiffness-limited blow-up: once |x| is large the trajectory
        // cannot return to the scan scale before t=1, so classify it as
        // escaped rather than failing (see solve_ivp contract).
        if (escape_bound > 0.0 && std::abs(y[0]) > 1e3) {
          out.y = y;
          out.t = t;
          out.escaped = true;
          out.escape_time = t;
          out.escape_sign = y[0] > 0 ? 1 : -1;
          return out;
        }
        throw IntegrationError("step size underflow at t = " + std::to_string(t),
                               t, y[0]);
      }
      continue;
    }

    // Accepted.
    if (obs != nullptr) obs->accepted(t, y, k1, t + h, ynew, k7);

    const double t_new = t + h;
    if (escape_bound > 0.0 && std::abs(ynew[0]) > escape_bound) {
      // Locate the crossing inside the step on the Hermite interpolant.
      double lo = t, hi = t_new;
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double xm =
            std::abs(hermite(t, y, k1, t_new, ynew, k7, 0, mid));
        (xm > escape_bound ? hi : lo) = mid;
      }
      out.y = ynew;
      out.t = t_new;
      out.escaped = true;
      out.escape_time = hi;
      out.escape_sign = ynew[0] > 0 ? 1 : -1;
      return out;
    }

    t = t_new;
    y = ynew;
    k1 = k7;

    double fac = kSafety * std::pow(err, -kAlpha) *
                 (have_prev ? std::pow(err_prev, kBeta) : 1.0);
    fac = std::max(kFacMin, std::min(kFacMax, fac));
    h = std::min(h * fac, 0.5);
    err_prev = std::max(err, 1e-10);
    have_prev = true;

    if (h < kMinStep) h = kMinStep;
  }

  if (t < 1.0 - 1e-12)
    throw IntegrationError("step budget exhausted at t = " + std::to_string(t),
                           t, y[0]);
  out.y = y;
  out.t = t;
  return out;
}

// Collects dense output for component 0 on the uniform node grid.
struct DenseCollector final : StepObserver {
  std::vector<double> times;
  std::vector<double> values;
  size_t next = 0;

  explicit DenseCollector(int n_nodes) {
    times.resize(static_cast<size_t>(n_nodes));
    values.assign(times.size(), 0.0);
    for (size_t i = 0; i < times.size(); ++i)
      times[i] = static_cast<double>(i) / (n_nodes - 1);
  }

  void accepted(double t0, const StateVec& y0, const StateVec& f0, double t1,
                const StateVec& y1, const StateVec& f1) override {
    if (next == 0 && !times.empty()) {
      values[0] = y0[0];
      next = 1;
    }
    while (next < times.size() && times[next] <= t1 + 1e-15) {
      values[next] = times[next] >= t1
                         ? y1[0]
                         : hermite(t0, y0, f0, t1, y1, f1, 0, times[next]);
      ++next;
    }
  }
};

struct AbelRhs {
  const AbelEquation* eq;
  void operator()(double t, const StateVec& y, StateVec& dydt) const {
    dydt[0] = eq->rhs(std::min(t, 1.0), y[0]);
  }
};

struct AbelVariationalRhs {
  const AbelEquation* eq;
  void operator()(double t, const StateVec& y, StateVec& dydt) const {
    const double tc = std::min(t, 1.0);
    const double x = y[0];
    const double a = eq->A.eval(tc), b = eq->B.eval(tc), c = eq->C.eval(tc);
    const double hx = (3.0 * a * x + 2.0 * b) * x + c;
    dydt[0] = ((a * x + b) * x + c) * x;
    dydt[1] = hx * y[1];
    dydt[2] = hx;
  }
};

}  // namespace

Trajectory solve_ivp(const AbelEquation& eq, double x0, double rel_tol,
                     double abs_tol) {
  StateVec y0;
  y0.n = 1;
  y0[0] = x0;
  DenseCollector dense(kDenseNodes);
  DriveResult r = drive(AbelRhs{&eq}, y0, rel_tol, abs_tol, kEscapeBound, &dense);

  Trajectory traj;
  if (r.escaped) {
    traj.terminal = TerminalKind::Escaped;
    traj.escape_time = r.escape_time;
    traj.escape_sign = r.escape_sign;
    const size_t kept = std::min(dense.next, dense.times.size());
    traj.times.assign(dense.times.begin(), dense.times.begin() + kept);
    traj.values.assign(dense.values.begin(), dense.values.begin() + kept);
    if (traj.times.empty()) {
      traj.times.push_back(0.0);
      traj.values.push_back(x0);
    }
    return traj;
  }
  traj.terminal = TerminalKind::Completed;
  traj.x1 = r.y[0];
  dense.values.back() = r.y[0];
  if (dense.next == 0) dense.values.front() = x0;
  traj.times = std::move(dense.times);
  traj.values = std::move(dense.values);
  return traj;
}

VariationalResult solve_with_variation(const AbelEquation& eq, double x0,
                                       double rel_tol, double abs_tol) {
  StateVec y0;
  y0.n = 3;
  y0[0] = x0;
  y0[1] = 1.0;  // variational factor
  y0[2] = 0.0;  // divergence integral
  DriveResult r =
      drive(AbelVariationalRhs{&eq}, y0, rel_tol, abs_tol, kEscapeBound, nullptr);
  if (r.escaped)
    throw std::domain_error(
        "solve_with_variation: trajectory escapes before t = 1; the map "
        "derivative is undefined");
  VariationalResult out;
  out.x1 = r.y[0];
  out.v1 = r.y[1];
  out.divergence_integral = r.y[2];
  return out;
}

detail::StateVec integrate_system(
    const std::function<void(double, const detail::StateVec&, detail::StateVec&)>& rhs,
    detail::StateVec y0, double rel_tol, double abs_tol) {
  DriveResult r = drive(rhs, y0, rel_tol, abs_tol, /*escape_bound=*/0.0, nullptr);
  return r.y;
}

}  // namespace abel
