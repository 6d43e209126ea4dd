#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "peakon/report.hpp"
#include "peakon/solution_field.hpp"

namespace peakon {

/// Uniform, inclusive sample times begin, ..., end.
struct TimeGrid {
  double begin = 0.0;
  double end = 0.0;
  std::size_t samples = 2;

  [[nodiscard]] std::vector<double> times() const;
  [[nodiscard]] double spacing() const;
};

struct PathSample {
  double t = 0.0;
  double x = 0.0;
  /// Field velocity u(t, x) at the path.
  double u = 0.0;
  /// Velocity obtained by integrating v' = -P_x(t, x) along the path.
  double v = 0.0;
};

struct CharacteristicPath {
  double xi = 0.0;
  double tolerance = 0.0;
  std::vector<PathSample> samples;
  /// The path came within merge_threshold(xi, 0) of the x = 0 characteristic.
  bool merged_to_zero = false;
  std::optional<double> merge_time;
};

/// Two characteristics count as merged once their distance is at most
/// max(1e-9, 1e-9 |xi - eta|).
[[nodiscard]] double merge_threshold(double xi, double eta);

class TraceError : public std::runtime_error {
 public:
  TraceError(double t, double x, const std::string& what);
  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] double x() const { return x_; }

 private:
  double t_, x_;
};

/// Solves x' = u(t, x) together with v' = -P_x(t, x) from x(begin) = xi and
/// v(begin) = u(begin, xi). At each field breakpoint v is reset to the field
/// velocity, so on the dissipative field paths come to rest after T0.
[[nodiscard]] CharacteristicPath trace(const SolutionField& field, double xi, const TimeGrid& grid,
                                       double tol);

/// Continues a path from `start` to `t_end`.
[[nodiscard]] PathSample trace_to(const SolutionField& field, const PathSample& start, double t_end,
                                  double tol);

/// Diagnostics for a pair xi > eta: f = x_xi - x_eta, g = u_xi - u_eta and
/// omega = g / f. omega is truncated at the first sample where the pair merges.
struct PairTracker {
  double xi = 0.0;
  double eta = 0.0;
  double threshold = 0.0;
  std::vector<double> t;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> omega;
  /// First sample time with f <= threshold. Depends on the threshold and the
  /// sample spacing; it is not the exact infimum.
  std::optional<double> meet_time;
};

/// Throws std::invalid_argument unless xi > eta.
[[nodiscard]] PairTracker track_pair(const SolutionField& field, double xi, double eta,
                                     const TimeGrid& grid, double tol);

/// Builds the pair diagnostics from two paths traced on the same grid.
[[nodiscard]] PairTracker pair_from_paths(const CharacteristicPath& upper,
                                          const CharacteristicPath& lower);

struct JacobianOptions {
  double h = 1e-2;
  std::size_t samples = 401;
};

struct JacobianResult {
  double value = 0.0;
  /// Set when xi lies in the collapse fan before the collapse and xi +- h
  /// leaves it.
  bool accuracy_warning = false;
  std::string note;
};

/// dx_xi(t)/dxi = exp(int_0^t omega), omega taken from the pair
/// (xi + h, xi - h); Richardson-extrapolated over h and h/2. Zero inside the
/// collapse fan from the collapse time on, and for pairs that merge.
[[nodiscard]] JacobianResult jacobian(const SolutionField& field, double xi, double t, double tol,
                                      const JacobianOptions& opts = {});

/// sqrt(2 E0) tan(-sqrt(E0/2) (t - T0)) for T0 <= t < T0 + pi / sqrt(2 E0).
/// Throws std::out_of_range outside that window.
[[nodiscard]] double omega_lower_bound(double E0, double t, double T0);

/// Fraction of interior samples violating
///   omega' >= -omega^2/2 - E0 - 10 tol_fd,
/// where omega' is the centered difference and tol_fd = |omega_{k+1} -
/// 2 omega_k + omega_{k-1}| / dt. Passes when at most 1% violate.
[[nodiscard]] VerificationReport omega_inequality_check(const PairTracker& pair, double E0);

/// omega(t) >= omega_lower_bound(E0, t, T0) on [T0, T0 + delta0].
[[nodiscard]] VerificationReport post_blowup_bound_check(const PairTracker& pair, double E0, double T0,
                                                         double delta0);

/// Once f drops to the threshold it stays there.
[[nodiscard]] VerificationReport merge_absorption_check(const PairTracker& pair);

/// (u_xi - u_eta)^2 <= (x_xi - x_eta) int_{x_eta}^{x_xi} u_x^2 at up to
/// `times` evenly chosen pre-merge samples.
[[nodiscard]] VerificationReport slope_difference_check(const SolutionField& field,
                                                        const CharacteristicPath& upper,
                                                        const CharacteristicPath& lower,
                                                        std::size_t times = 100);

}  // namespace peakon
