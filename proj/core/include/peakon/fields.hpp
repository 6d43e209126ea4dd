#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace peakon {

struct Peakon {
  double amplitude = 0.0;
  double position = 0.0;
};

/// A finite superposition u(x) = sum_i a_i exp(-|x - y_i|).
///
/// Positions are kept strictly increasing. The empty ensemble is the zero
/// field.
class PeakonEnsemble {
 public:
  PeakonEnsemble() = default;

  /// Throws std::invalid_argument if any entry is non-finite or the positions
  /// are not strictly increasing.
  explicit PeakonEnsemble(std::vector<Peakon> peaks);

  /// The pair {(+p/2, -q), (-p/2, +q)}.
  static PeakonEnsemble antisymmetric_pair(double p, double q);

  [[nodiscard]] std::span<const Peakon> peaks() const { return peaks_; }
  [[nodiscard]] std::size_t size() const { return peaks_.size(); }
  [[nodiscard]] bool empty() const { return peaks_.empty(); }
  [[nodiscard]] std::vector<double> positions() const;

  /// Sum of |a_i|; an upper bound for |u|.
  [[nodiscard]] double total_variation_bound() const;

  /// The ensemble reflected under (a, y) -> (-a, -y).
  [[nodiscard]] PeakonEnsemble reflected() const;

 private:
  std::vector<Peakon> peaks_;
};

struct FieldSample {
  double t = 0.0;
  double x = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double P = 0.0;
  double Px = 0.0;
  /// x coincides with a peak; ux holds the right limit there.
  bool at_kink = false;
};

[[nodiscard]] double eval_u(const PeakonEnsemble& ens, double x);

/// Piecewise derivative with sgn(0) = +1, i.e. the right limit at a peak.
[[nodiscard]] double eval_ux(const PeakonEnsemble& ens, double x);

[[nodiscard]] bool is_kink(const PeakonEnsemble& ens, double x);

struct Pressure {
  double P = 0.0;
  double Px = 0.0;
};

/// P = 1/2 exp(-|x|) * (u^2 + u_x^2 / 2) and its derivative, integrated in
/// closed form on each inter-peak interval.
[[nodiscard]] Pressure eval_pressure(const PeakonEnsemble& ens, double x);
[[nodiscard]] double eval_P(const PeakonEnsemble& ens, double x);
[[nodiscard]] double eval_Px(const PeakonEnsemble& ens, double x);

/// E = int (u^2 + u_x^2) dx = 2 sum_{i,j} a_i a_j exp(-|y_i - y_j|).
[[nodiscard]] double energy(const PeakonEnsemble& ens);

[[nodiscard]] FieldSample sample(const PeakonEnsemble& ens, double x, double t = 0.0);

}  // namespace peakon
