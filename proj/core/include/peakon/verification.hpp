#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "peakon/characteristics.hpp"
#include "peakon/report.hpp"
#include "peakon/solution_field.hpp"

namespace peakon {

// Finite-difference steps and exclusion radii used by the checks below.
//
//   quantity                              value   used by
//   centered space step h_x               1e-3    identity_suite (P_xx)
//   centered time step h_t                1e-3    identity_suite (u_t), alpha_residual
//   kink exclusion radius                 10 h    identity_suite, weak_form_residual
//                                                 (times (1 + max|u|) for time steps)
//   quadrature half width                 30      energy_series, cumulative integrals
namespace fd {
inline constexpr double kSpaceStep = 1e-3;
inline constexpr double kTimeStep = 1e-3;
inline constexpr double kKinkExclusion = 10.0;
inline constexpr double kHalfWidth = 30.0;
}  // namespace fd

/// u_x(t, x) <= C (1 + 1/t): C is the sup of u_x / (1 + 1/t) over the grid and
/// the field's kinks (right limits), compared against `ceiling`.
/// Throws std::invalid_argument if some t <= 0.
[[nodiscard]] VerificationReport oleinik_scan(const SolutionField& field, std::span<const double> t_grid,
                                              std::span<const double> x_grid, double ceiling);

struct EnergySeries {
  std::vector<double> t;
  std::vector<double> energy;
  double E0 = 0.0;
  /// Largest drop between consecutive samples and the sample time after it.
  double largest_drop = 0.0;
  double drop_time = 0.0;
  VerificationReport report;
};

/// E(t) by tail-corrected quadrature; checks E(t) <= E0 (1 + rel_tol) with E0
/// the quadrature value at t = 0. Quadrature non-convergence fails the check.
[[nodiscard]] EnergySeries energy_series(const SolutionField& field, std::span<const double> t_grid,
                                         double rel_tol = 1e-6);

struct WeakFormOptions {
  double h_t = 1e-4;
  double tol = 1e-5;
};

/// Discrete L2 norm over x_grid of (u(t+h) - u(t-h))/(2h) + u u_x + P_x.
/// Grid points within the kink exclusion radius are skipped. Throws
/// std::invalid_argument if [t - h, t + h] contains a field breakpoint.
[[nodiscard]] VerificationReport weak_form_residual(const SolutionField& field, double t,
                                                    std::span<const double> x_grid,
                                                    const WeakFormOptions& opts = {});

/// Passes when the control field's residual is at least `factor` times the
/// solution's residual (max_residual = factor * r_solution / r_control).
[[nodiscard]] VerificationReport weak_form_negative_control(const SolutionField& solution,
                                                            const SolutionField& control, double t,
                                                            std::span<const double> x_grid,
                                                            const WeakFormOptions& opts = {},
                                                            double factor = 10.0);

struct IdentityPoint {
  double x = 0.0;
  /// P - P_xx - (u^2 + u_x^2 / 2).
  double helmholtz = 0.0;
  /// int_{-inf}^x u_t + P + u^2 / 2.
  double cumulative = 0.0;
  bool excluded = false;
};

[[nodiscard]] std::vector<IdentityPoint> identity_residuals(const SolutionField& field, double t,
                                                            std::span<const double> x_grid,
                                                            double h = fd::kSpaceStep);

/// Max residual of both identities over non-excluded points against `tol`.
[[nodiscard]] VerificationReport identity_suite(const SolutionField& field, double t,
                                                std::span<const double> x_grid, double tol,
                                                double h = fd::kSpaceStep);

/// alpha = u_x - int_{-inf}^x u evaluated along a characteristic.
[[nodiscard]] double alpha_at(const SolutionField& field, double t, double x);

/// Residual of alpha' = -(alpha + int u)^2 / 2 + u^2 / 2 along `path` at each
/// requested time, using a centered difference of step h in time. Times where
/// the path is within the kink exclusion radius are skipped. Throws
/// std::invalid_argument if a time window touches a field breakpoint.
[[nodiscard]] VerificationReport alpha_residual(const SolutionField& field, const CharacteristicPath& path,
                                                std::span<const double> times, double tol,
                                                double h = fd::kTimeStep);

/// w' + w^2 / 2 = g(t), w(T0) = 0 on [T0, T0 + delta0], with sup |g| = Kg < K0.
struct RiccatiProblem {
  double Kg = 0.0;
  double K0 = 1.0;
  double T0 = 0.0;
  double delta0 = 0.1;
  std::function<double(double)> source;

  /// Throws std::invalid_argument unless 0 <= Kg < K0, delta0 > 0 and a
  /// source is set.
  void validate() const;

  /// tan(sqrt(K0/2) delta0) <= 3 sqrt(K0/2) delta0, the smallness under which
  /// |w| <= 3 Kg delta0 is guaranteed.
  [[nodiscard]] bool in_admissible_regime() const;
};

struct RiccatiSample {
  double t = 0.0;
  double w = 0.0;
};

struct RiccatiSolution {
  std::vector<RiccatiSample> samples;
  double max_abs_w = 0.0;
  double bound = 0.0;  // 3 Kg delta0
  bool in_admissible_regime = false;
  bool bound_holds = false;
};

class RiccatiEscape : public std::runtime_error {
 public:
  explicit RiccatiEscape(double escape_time);
  [[nodiscard]] double escape_time() const { return escape_time_; }

 private:
  double escape_time_;
};

/// Throws RiccatiEscape if w blows down before T0 + delta0.
[[nodiscard]] RiccatiSolution riccati_solve(const RiccatiProblem& prob, double tol);

[[nodiscard]] VerificationReport riccati_bound_report(const RiccatiSolution& sol);

struct ContractionSequence {
  double E0 = 0.0;
  double delta0 = 0.0;
  std::vector<double> D;
  /// 18 D_1 delta0^2 < 1.
  bool contraction = false;
  bool diverges = false;
  /// D_n < epsilon.
  bool below_epsilon = false;
};

/// D_1 = 3 E0, D_{i+1} = 18 D_i^2 delta0^2. Throws std::invalid_argument
/// unless E0 > 0, delta0 >= 0 and n >= 1.
[[nodiscard]] ContractionSequence contraction_sequence(double E0, double delta0, std::size_t n,
                                                       double epsilon = 1e-3);

/// max |P|, |P_x| over the grid against energy(t) / 2.
[[nodiscard]] VerificationReport p_bounds_check(const SolutionField& field, std::span<const double> t_grid,
                                                std::span<const double> x_grid, double tol = 1e-9);

/// tan(sqrt(E0/2) delta0) <= 3 sqrt(E0/2) delta0 with the argument below pi/2.
[[nodiscard]] bool delta0_admissible(double E0, double delta0);

/// min(0.1, 0.1 / sqrt(E0)); throws std::logic_error if that fails
/// delta0_admissible.
[[nodiscard]] double default_delta0(double E0);

/// n evenly spaced points on [lo, hi].
[[nodiscard]] std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace peakon
