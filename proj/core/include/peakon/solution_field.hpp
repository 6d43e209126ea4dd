#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "peakon/fields.hpp"

namespace peakon {

enum class Provenance { closed_form, grid, static_ensemble, zero };

[[nodiscard]] std::string_view to_string(Provenance p);

/// Interval of starting points whose characteristics collapse to a single
/// point at `time`.
struct CollapseFan {
  double lo = 0.0;
  double hi = 0.0;
  double time = 0.0;
};

/// A total space-time field (t, x) -> (u, u_x, P, P_x) for t >= 0.
/// Implementations are immutable and safe to share across threads.
class SolutionField {
 public:
  virtual ~SolutionField() = default;

  [[nodiscard]] virtual FieldSample sample(double t, double x) const = 0;
  [[nodiscard]] virtual Provenance provenance() const = 0;

  /// Points where u_x(t, .) jumps. Quadratures split there.
  [[nodiscard]] virtual std::vector<double> kinks(double /*t*/) const { return {}; }

  /// Times across which the field is not differentiable in t.
  [[nodiscard]] virtual std::vector<double> breakpoints() const { return {}; }

  [[nodiscard]] virtual std::optional<CollapseFan> collapse() const { return std::nullopt; }

  /// Total energy int (u^2 + u_x^2) dx. The default uses tail-corrected
  /// quadrature on [-30, 30].
  [[nodiscard]] virtual double energy(double t) const;

  [[nodiscard]] double u(double t, double x) const { return sample(t, x).u; }
  [[nodiscard]] double Px(double t, double x) const { return sample(t, x).Px; }
};

class ZeroField final : public SolutionField {
 public:
  [[nodiscard]] FieldSample sample(double t, double x) const override { return {t, x}; }
  [[nodiscard]] Provenance provenance() const override { return Provenance::zero; }
  [[nodiscard]] double energy(double) const override { return 0.0; }
};

/// A peakon ensemble frozen in time. Not a solution of the equation unless
/// the ensemble is empty; used as a negative control.
class StaticEnsembleField final : public SolutionField {
 public:
  explicit StaticEnsembleField(PeakonEnsemble ens) : ens_(std::move(ens)) {}

  [[nodiscard]] FieldSample sample(double t, double x) const override {
    return peakon::sample(ens_, x, t);
  }
  [[nodiscard]] Provenance provenance() const override { return Provenance::static_ensemble; }
  [[nodiscard]] std::vector<double> kinks(double) const override { return ens_.positions(); }
  [[nodiscard]] double energy(double) const override { return peakon::energy(ens_); }

 private:
  PeakonEnsemble ens_;
};

}  // namespace peakon
