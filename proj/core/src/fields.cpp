#include "peakon/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^len V exp(-s y) dy; len may be +inf.
double decay_integral(double V, double s, double len) {
  if (V == 0.0) return 0.0;
  if (std::isinf(len)) return V / s;
  return V * (-std::expm1(-s * len)) / s;
}

// On an inter-peak interval [L, R] the field is
//   u = alpha exp(-(y - L)) + beta exp(-(R - y)),
//   u_x = -alpha exp(-(y - L)) + beta exp(-(R - y)),
// so u^2 + u_x^2/2 = 3/2 alpha^2 e^{-2(y-L)} + 3/2 beta^2 e^{-2(R-y)}
//                    + alpha beta e^{-(R-L)}.
struct Interval {
  double L = -kInf;
  double R = kInf;
  double alpha = 0.0;  // zero when L = -inf
  double beta = 0.0;   // zero when R = +inf
};

// Accumulates int_a^b exp(-|x - y|) f(y) dy for a part of `iv` lying entirely
// on one side of x. Every exponent below is a non-positive distance.
void accumulate_part(const Interval& iv, double a, double b, double x, double& left,
                     double& right) {
  if (!(b > a)) return;
  const bool has_left_node = std::isfinite(iv.L) && iv.alpha != 0.0;
  const bool has_right_node = std::isfinite(iv.R) && iv.beta != 0.0;
  const double len = b - a;
  const double a2 = 1.5 * iv.alpha * iv.alpha;
  const double b2 = 1.5 * iv.beta * iv.beta;
  double acc = 0.0;
  if (b <= x) {
    // kernel exp(-(x - y))
    if (has_left_node) acc += decay_integral(a2 * std::exp(-(a - iv.L) - (x - iv.L)), 1.0, len);
    if (has_right_node) acc += decay_integral(b2 * std::exp(-2.0 * (iv.R - b) - (x - b)), 3.0, len);
    if (has_left_node && has_right_node)
      acc += decay_integral(iv.alpha * iv.beta * std::exp(-(iv.R - iv.L) - (x - b)), 1.0, len);
    left += acc;
  } else {
    // kernel exp(-(y - x)), a >= x
    if (has_left_node) acc += decay_integral(a2 * std::exp(-2.0 * (a - iv.L) - (a - x)), 3.0, len);
    if (has_right_node) acc += decay_integral(b2 * std::exp(-2.0 * (iv.R - b) - (b - x)), 1.0, len);
    if (has_left_node && has_right_node)
      acc += decay_integral(iv.alpha * iv.beta * std::exp(-(iv.R - iv.L) - (a - x)), 1.0, len);
    right += acc;
  }
}

}  // namespace

PeakonEnsemble::PeakonEnsemble(std::vector<Peakon> peaks) : peaks_(std::move(peaks)) {
  for (std::size_t i = 0; i < peaks_.size(); ++i) {
    if (!std::isfinite(peaks_[i].amplitude) || !std::isfinite(peaks_[i].position))
      throw std::invalid_argument("peakon ensemble: non-finite entry at index " + std::to_string(i));
    if (i > 0 && !(peaks_[i].position > peaks_[i - 1].position))
      throw std::invalid_argument("peakon ensemble: positions must be strictly increasing (index " +
                                  std::to_string(i) + ")");
  }
}

PeakonEnsemble PeakonEnsemble::antisymmetric_pair(double p, double q) {
  return PeakonEnsemble({{0.5 * p, -q}, {-0.5 * p, q}});
}

std::vector<double> PeakonEnsemble::positions() const {
  std::vector<double> out;
  out.reserve(peaks_.size());
  for (const auto& pk : peaks_) out.push_back(pk.position);
  return out;
}

double PeakonEnsemble::total_variation_bound() const {
  double s = 0.0;
  for (const auto& pk : peaks_) s += std::abs(pk.amplitude);
  return s;
}

PeakonEnsemble PeakonEnsemble::reflected() const {
  std::vector<Peakon> out(peaks_.rbegin(), peaks_.rend());
  for (auto& pk : out) {
    pk.amplitude = -pk.amplitude;
    pk.position = -pk.position;
  }
  return PeakonEnsemble(std::move(out));
}

double eval_u(const PeakonEnsemble& ens, double x) {
  double u = 0.0;
  for (const auto& pk : ens.peaks()) u += pk.amplitude * std::exp(-std::abs(x - pk.position));
  return u;
}

double eval_ux(const PeakonEnsemble& ens, double x) {
  double ux = 0.0;
  for (const auto& pk : ens.peaks()) {
    const double d = x - pk.position;
    const double sgn = d >= 0.0 ? 1.0 : -1.0;
    ux -= sgn * pk.amplitude * std::exp(-std::abs(d));
  }
  return ux;
}

bool is_kink(const PeakonEnsemble& ens, double x) {
  const auto peaks = ens.peaks();
  return std::any_of(peaks.begin(), peaks.end(), [x](const Peakon& pk) { return pk.position == x; });
}

Pressure eval_pressure(const PeakonEnsemble& ens, double x) {
  const auto peaks = ens.peaks();
  const std::size_t n = peaks.size();
  if (n == 0) return {};

  // alpha for interval k (k >= 1): sum_{i<k} a_i exp(-(y_{k-1} - y_i)).
  std::vector<double> alpha(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double decay = k >= 2 ? std::exp(-(peaks[k - 1].position - peaks[k - 2].position)) : 0.0;
    alpha[k] = alpha[k - 1] * decay + peaks[k - 1].amplitude;
  }
  // beta for interval k (k <= n-1): sum_{i>=k} a_i exp(-(y_i - y_k)).
  std::vector<double> beta(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const double decay = k + 1 < n ? std::exp(-(peaks[k + 1].position - peaks[k].position)) : 0.0;
    beta[k] = beta[k + 1] * decay + peaks[k].amplitude;
  }

  double left = 0.0;
  double right = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    Interval iv;
    iv.L = k >= 1 ? peaks[k - 1].position : -kInf;
    iv.R = k < n ? peaks[k].position : kInf;
    iv.alpha = k >= 1 ? alpha[k] : 0.0;
    iv.beta = k < n ? beta[k] : 0.0;
    if (x <= iv.L) {
      accumulate_part(iv, iv.L, iv.R, x, left, right);
    } else if (x >= iv.R) {
      accumulate_part(iv, iv.L, iv.R, x, left, right);
    } else {
      accumulate_part(iv, iv.L, x, x, left, right);
      accumulate_part(iv, x, iv.R, x, left, right);
    }
  }
  return {0.5 * (left + right), 0.5 * (right - left)};
}

double eval_P(const PeakonEnsemble& ens, double x) { return eval_pressure(ens, x).P; }

double eval_Px(const PeakonEnsemble& ens, double x) { return eval_pressure(ens, x).Px; }

double energy(const PeakonEnsemble& ens) {
  const auto peaks = ens.peaks();
  double e = 0.0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    e += 2.0 * peaks[i].amplitude * peaks[i].amplitude;
    for (std::size_t j = i + 1; j < peaks.size(); ++j)
      e += 4.0 * peaks[i].amplitude * peaks[j].amplitude *
           std::exp(-(peaks[j].position - peaks[i].position));
  }
  return e;
}

FieldSample sample(const PeakonEnsemble& ens, double x, double t) {
  const Pressure pr = eval_pressure(ens, x);
  return {t, x, eval_u(ens, x), eval_ux(ens, x), pr.P, pr.Px, is_kink(ens, x)};
}

}  // namespace peakon
