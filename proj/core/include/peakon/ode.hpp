#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace peakon::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// Thrown when the controller cannot find a step that meets the tolerance,
/// which in this code base means a finite-time singularity is being
/// approached. `last_time` is the last time at which the state was accepted.
class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(double last_time, double step)
      : std::runtime_error("step size underflow at t = " + std::to_string(last_time) +
                           " (h = " + std::to_string(step) + ")"),
        last_time_(last_time) {}
  [[nodiscard]] double last_time() const { return last_time_; }

 private:
  double last_time_;
};

class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(double t) : std::runtime_error("non-finite state at t = " + std::to_string(t)), time_(t) {}
  [[nodiscard]] double time() const { return time_; }

 private:
  double time_;
};

struct Settings {
  /// Local error per step is held below tol * (1 + |y_i|) componentwise.
  double tol = 1e-10;
  double initial_step = 0.0;  // 0 = automatic
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 10'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// Integrates y' = rhs(t, y) over [t, t_end] in place. `observer(t, y)` is
/// called after every accepted step. Returns the last step size, which can be
/// passed back as Settings::initial_step to continue on the next segment.
template <std::size_t N, class Rhs, class Observer>
double integrate(Rhs&& rhs, double& t, State<N>& y, double t_end, const Settings& settings,
                 Observer&& observer, Stats* stats = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double safety = 0.9, min_factor = 0.2, max_factor = 5.0;
  static constexpr double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;

  if (!(t_end > t)) return settings.initial_step;
  const double span = t_end - t;

  Stats local;
  Stats& st = stats ? *stats : local;
  auto eval = [&](double tt, const State<N>& yy) {
    ++st.evaluations;
    State<N> k = rhs(tt, yy);
    return k;
  };

  State<N> k1 = eval(t, y);
  double h = settings.initial_step;
  if (!(h > 0.0)) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = settings.tol * (1.0 + std::abs(y[i]));
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.01 * span);
  }
  h = std::min(h, settings.max_step);

  double err_prev = 1e-4;
  State<N> k2, k3, k4, k5, k6, k7, ytmp, ynew;
  std::size_t steps = 0;
  bool last_rejected = false;
  while (t < t_end) {
    if (++steps > settings.max_steps)
      throw std::runtime_error("ode::integrate: step budget exhausted at t = " + std::to_string(t));
    if (t_end - t <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      t = t_end;
      break;
    }
    bool hits_end = false;
    const double h_proposed = h;
    if (t + h >= t_end) {
      h = t_end - t;
      hits_end = true;
    }
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
      throw StepSizeUnderflow(t, h);

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = eval(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = eval(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = eval(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = eval(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = hits_end ? t_end : t + h;
    k6 = eval(t_new, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = eval(t_new, ynew);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = settings.tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
      if (!std::isfinite(ei) || !std::isfinite(ynew[i])) finite = false;
      err = std::max(err, std::abs(ei) / sc);
    }
    if (!finite) {
      ++st.rejected;
      h *= min_factor;
      last_rejected = true;
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
        throw NonFiniteState(t);
      continue;
    }

    if (err <= 1.0) {
      double factor = err == 0.0 ? max_factor
                                 : safety * std::pow(err, -alpha) * std::pow(err_prev, beta);
      factor = std::clamp(factor, min_factor, max_factor);
      if (last_rejected) factor = std::min(factor, 1.0);
      err_prev = std::max(err, 1e-4);
      t = t_new;
      y = ynew;
      k1 = k7;
      ++st.accepted;
      observer(t, static_cast<const State<N>&>(y));
      last_rejected = false;
      if (hits_end) {
        h = std::min(std::max(h_proposed, h * factor), settings.max_step);
        break;
      }
      h = std::min(h * factor, settings.max_step);
    } else {
      ++st.rejected;
      const double factor = std::max(min_factor, safety * std::pow(err, -alpha));
      h *= factor;
      last_rejected = true;
    }
  }
  return h;
}

template <std::size_t N, class Rhs>
double integrate(Rhs&& rhs, double& t, State<N>& y, double t_end, const Settings& settings) {
  return integrate<N>(std::forward<Rhs>(rhs), t, y, t_end, settings, [](double, const State<N>&) {});
}

}  // namespace peakon::ode
