#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <stdexcept>
#include <vector>

#include "peakon/dynamics.hpp"
#include "peakon/solution_field.hpp"

namespace peakon::grid {

enum class Reconstruction { first_order, minmod };

struct GridConfig {
  double L = 20.0;
  std::size_t N = 4001;
  double eps = 1e-3;
  double cfl = 0.5;
  double t_end = 1.0;
  /// Extra output times in (0, t_end]; t_end is always emitted.
  std::vector<double> snapshot_times;
  /// Upper bound for the analytic tail estimate exp(-(L - q0)) E0.
  double tail_tol = 1e-6;
  Reconstruction reconstruction = Reconstruction::first_order;

  /// Throws std::invalid_argument on L <= 0, even or small N, eps < 0,
  /// cfl outside (0, 1), or t_end < 0.
  void validate() const;
  [[nodiscard]] double dx() const { return 2.0 * L / static_cast<double>(N - 1); }
};

struct GridState {
  double t = 0.0;
  std::vector<double> u;
  double dx = 0.0;

  [[nodiscard]] std::size_t size() const { return u.size(); }
  /// Node i sits at (i - (N-1)/2) dx so the grid is exactly symmetric.
  [[nodiscard]] double x(std::size_t i) const;
};

class GridInstability : public std::runtime_error {
 public:
  GridInstability(double t, const std::string& what);
  [[nodiscard]] double time() const { return t_; }

 private:
  double t_;
};

struct HelmholtzResult {
  std::vector<double> P;
  std::vector<double> Px;
  /// Set when 4/dx^2 is large enough that rounding in the solve is no
  /// longer negligible against the source.
  bool ill_conditioned = false;
};

/// Solves (I - D_xx) P = u^2 + ((D+ u)^2 + (D- u)^2) / 4 with P = 0 at both ends.
[[nodiscard]] HelmholtzResult helmholtz_solve(const GridState& state);

[[nodiscard]] double stable_dt(const GridState& state, const GridConfig& cfg);

/// One SSP-RK2 step of u_t + (u^2/2)_x = -P_x + eps u_xx, of size
/// min(stable_dt, dt_max). Throws GridInstability on non-finite data.
[[nodiscard]] GridState step(const GridState& state, const GridConfig& cfg,
                             double dt_max = std::numeric_limits<double>::infinity());

/// sum(u^2) dx + sum(forward difference^2) dx.
[[nodiscard]] double discrete_energy(const GridState& state);

[[nodiscard]] GridState initial_state(const AntisymmetricIC& ic, const GridConfig& cfg);

struct RunResult {
  std::vector<GridState> snapshots;
  std::vector<double> energy_t;
  std::vector<double> energy;
  std::size_t steps = 0;
  /// Largest increase of the discrete energy over one step (<= 0 when the
  /// energy never grows).
  double max_energy_increase = 0.0;
  double tail_estimate = 0.0;
  bool experimental = false;
};

/// Throws std::invalid_argument if the tail estimate exceeds cfg.tail_tol or
/// t_end is beyond 10 T0.
[[nodiscard]] RunResult run(const AntisymmetricIC& ic, const GridConfig& cfg);

[[nodiscard]] double linf_error(const GridState& state, const SolutionField& exact);
[[nodiscard]] double max_abs(const GridState& state);
/// max |u_i + u_{N-1-i}|.
[[nodiscard]] double odd_asymmetry(const GridState& state);

/// Piecewise-linear interpolant of a snapshot sequence in t and x.
/// Zero outside [-L, L].
class GridField final : public SolutionField {
 public:
  explicit GridField(std::vector<GridState> snapshots);

  [[nodiscard]] FieldSample sample(double t, double x) const override;
  [[nodiscard]] Provenance provenance() const override { return Provenance::grid; }
  [[nodiscard]] double energy(double t) const override;

  [[nodiscard]] const std::vector<GridState>& snapshots() const { return snaps_; }

 private:
  struct Level {
    double t;
    double dx;
    std::vector<double> u, ux, P, Px;
    double energy;
  };
  [[nodiscard]] FieldSample sample_level(const Level& lv, double x) const;

  std::vector<GridState> snaps_;
  std::vector<Level> levels_;
};

}  // namespace peakon::grid
