#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace peakon {

class SolutionField;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod on [a, b], split at every breakpoint inside it.
[[nodiscard]] QuadratureResult integrate_piecewise(const std::function<double(double)>& f, double a,
                                                   double b, std::span<const double> breaks,
                                                   double rel_tol = 1e-12);

/// int_{-inf}^{inf} (u^2 + u_x^2) dx at time t: quadrature on [-L, L] split at
/// the kinks, plus the tail (u^2 + u_x^2)/2 at +-L, which is exact for
/// exp(-|x|) decay.
[[nodiscard]] QuadratureResult energy_quadrature(const SolutionField& field, double t,
                                                 double half_width = 30.0);

/// int_{-inf}^{x} u(t, y) dy with the tail u(-L) added for exp decay.
[[nodiscard]] QuadratureResult cumulative_u(const SolutionField& field, double t, double x,
                                            double half_width = 30.0);

/// Sorted union of kink locations of the field at the given times.
[[nodiscard]] std::vector<double> merged_kinks(const SolutionField& field,
                                               std::initializer_list<double> times);

}  // namespace peakon
