#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "peakon/fields.hpp"
#include "peakon/solution_field.hpp"

namespace peakon {

/// Peakon-antipeakon data u0 = p0/2 (exp(-|x + q0|) - exp(-|x - q0|)).
class AntisymmetricIC {
 public:
  [[nodiscard]] double p0() const { return p0_; }
  [[nodiscard]] double q0() const { return q0_; }
  /// Conserved energy root, H0^2 = p0^2 (1 - exp(-2 q0)).
  [[nodiscard]] double H0() const { return H0_; }
  /// Collision (gradient blowup) time.
  [[nodiscard]] double T0() const { return T0_; }
  [[nodiscard]] double E0() const { return H0_ * H0_; }

  /// Latest time accepted by closed_form_state.
  [[nodiscard]] double guard_time() const;

  [[nodiscard]] PeakonEnsemble initial_ensemble() const;

 private:
  friend AntisymmetricIC make_ic(double p0, double q0);
  AntisymmetricIC(double p0, double q0, double H0, double T0) : p0_(p0), q0_(q0), H0_(H0), T0_(T0) {}

  double p0_, q0_, H0_, T0_;
};

/// Throws std::domain_error unless p0 > 0 and q0 > 0 (both finite).
[[nodiscard]] AntisymmetricIC make_ic(double p0, double q0);

struct MomentumState {
  double t = 0.0;
  double p = 0.0;
  double q = 0.0;
};

/// Relative defect |p^2 (1 - exp(-2q)) - H0^2| / H0^2 of the conserved energy.
[[nodiscard]] double invariant_residual(const AntisymmetricIC& ic, const MomentumState& s);

/// Explicit p(t), q(t) on [0, T0). Throws std::out_of_range for t < 0 or for
/// t past the blowup guard T0 (1 - 1e-14).
[[nodiscard]] MomentumState closed_form_state(const AntisymmetricIC& ic, double t);

struct PqRate {
  double dq = 0.0;
  double dp = 0.0;
};

/// q' = p/2 (exp(-2q) - 1), p' = p^2/2 exp(-2q).
[[nodiscard]] PqRate rhs_pq(const MomentumState& s);

class BlowupApproach : public std::runtime_error {
 public:
  BlowupApproach(double last_valid_time);
  [[nodiscard]] double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// Adaptive Dormand-Prince trajectory of the (p, q) system, one state per
/// accepted step including t = 0. Throws std::domain_error if t_end is outside
/// [0, T0) or tol <= 0, and BlowupApproach if the step size underflows.
[[nodiscard]] std::vector<MomentumState> integrate_pq(const AntisymmetricIC& ic, double t_end, double tol);

/// The dissipative solution: the two-peakon closed form before T0 and the zero
/// field afterwards.
class ClosedFormField final : public SolutionField {
 public:
  explicit ClosedFormField(const AntisymmetricIC& ic) : ic_(ic) {}

  [[nodiscard]] const AntisymmetricIC& ic() const { return ic_; }

  /// Empty once t reaches the blowup guard.
  [[nodiscard]] PeakonEnsemble ensemble_at(double t) const;

  [[nodiscard]] FieldSample sample(double t, double x) const override;
  [[nodiscard]] Provenance provenance() const override { return Provenance::closed_form; }
  [[nodiscard]] std::vector<double> kinks(double t) const override;
  [[nodiscard]] std::vector<double> breakpoints() const override { return {ic_.T0()}; }
  [[nodiscard]] std::optional<CollapseFan> collapse() const override {
    return CollapseFan{-ic_.q0(), ic_.q0(), ic_.T0()};
  }
  [[nodiscard]] double energy(double t) const override;

  /// sup_x |u(t, x)| = H0^2 / (2 p(t)), attained at x = +-q(t); 0 after T0.
  [[nodiscard]] double max_abs_u(double t) const;

 private:
  AntisymmetricIC ic_;
};

[[nodiscard]] ClosedFormField dissipative_field(const AntisymmetricIC& ic);

}  // namespace peakon
