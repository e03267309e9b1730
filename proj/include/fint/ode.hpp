#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "fint/errors.hpp"

namespace fint::ode {

struct Tolerance {
  double rtol = 1e-12;
  double atol = 1e-14;
  long max_steps = 2'000'000;
};

/// Adaptive Dormand-Prince 5(4) for y' = f(t, y) from t0 to t1.
/// State is any Eigen dense type (real or complex).
template <typename State, typename Rhs>
State dopri5(const Rhs& f, double t0, double t1, State y, const Tolerance& tol = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(std::abs(span), 1e-3 * std::max(1.0, std::abs(span)));
  State k1 = f(t, y);
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > tol.max_steps) throw NumericalError("dopri5: step budget exhausted");
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    const State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    const State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    const State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 =
        f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = f(t + h, y_new);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale_ref = std::max(y.cwiseAbs().maxCoeff(), y_new.cwiseAbs().maxCoeff());
    const double err_norm = err.cwiseAbs().maxCoeff() / (tol.atol + tol.rtol * scale_ref);
    if (err_norm <= 1.0) {
      t += h;
      y = std::move(y_new);
      k1 = k7;  // first-same-as-last
    }
    const double factor =
        err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h *= factor;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw NumericalError("dopri5: step size underflow");
  }
  return y;
}

}  // namespace fint::ode
