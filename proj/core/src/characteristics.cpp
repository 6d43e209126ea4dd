#include "peakon/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "peakon/ode.hpp"
#include "peakon/quadrature.hpp"

namespace peakon {

namespace {

constexpr double kMergeFloor = 1e-9;

std::string format_point(double t, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "(t = " << t << ", x = " << x << ")";
  return os.str();
}

class PathIntegrator {
 public:
  PathIntegrator(const SolutionField& field, double tol) : field_(field) {
    settings_.tol = tol;
    const auto bp = field.breakpoints();
    breaks_.assign(bp.begin(), bp.end());
    std::sort(breaks_.begin(), breaks_.end());
  }

  // Advances (x, v) from t to t_end, splitting at breakpoints.
  void advance(double& t, ode::State<2>& y, double t_end) {
    auto rhs = [this](double tt, const ode::State<2>& s) {
      const FieldSample fs = field_.sample(tt, s[0]);
      if (!std::isfinite(fs.u) || !std::isfinite(fs.Px))
        throw TraceError(tt, s[0], "trace: non-finite field sample at " + format_point(tt, s[0]));
      return ode::State<2>{fs.u, -fs.Px};
    };
    while (t < t_end) {
      double stop = t_end;
      bool at_break = false;
      for (double b : breaks_) {
        if (b > t && b <= t_end) {
          stop = b;
          at_break = true;
          break;
        }
      }
      try {
        settings_.initial_step = ode::integrate<2>(rhs, t, y, stop, settings_);
      } catch (const ode::StepSizeUnderflow& e) {
        throw TraceError(e.last_time(), y[0], std::string("trace: ") + e.what());
      }
      t = stop;
      if (at_break) y[1] = field_.sample(t, y[0]).u;
    }
  }

 private:
  const SolutionField& field_;
  ode::Settings settings_;
  std::vector<double> breaks_;
};

// Composite Simpson on uniform samples; the last interval falls back to the
// trapezoid rule when the count is even.
double simpson(const std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const std::size_t m = (n - 1) % 2 == 0 ? n : n - 1;
  double s = 0.0;
  if (m >= 3) {
    s = y[0] + y[m - 1];
    for (std::size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
    s *= dt / 3.0;
  }
  if (m != n) s += 0.5 * dt * (y[n - 2] + y[n - 1]);
  return s;
}

}  // namespace

std::vector<double> TimeGrid::times() const {
  if (samples == 0) return {};
  if (samples == 1 || end == begin) return {begin};
  std::vector<double> out(samples);
  const double dt = (end - begin) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) out[i] = begin + dt * static_cast<double>(i);
  out.back() = end;
  return out;
}

double TimeGrid::spacing() const {
  return samples > 1 ? (end - begin) / static_cast<double>(samples - 1) : 0.0;
}

double merge_threshold(double xi, double eta) {
  return std::max(kMergeFloor, kMergeFloor * std::abs(xi - eta));
}

TraceError::TraceError(double t, double x, const std::string& what)
    : std::runtime_error(what), t_(t), x_(x) {}

CharacteristicPath trace(const SolutionField& field, double xi, const TimeGrid& grid, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("trace: tol must be positive");
  if (!(grid.begin >= 0.0) || grid.end < grid.begin)
    throw std::invalid_argument("trace: time grid must satisfy 0 <= begin <= end");

  CharacteristicPath path;
  path.xi = xi;
  path.tolerance = tol;
  const auto times = grid.times();
  path.samples.reserve(times.size());

  PathIntegrator integrator(field, tol);
  double t = grid.begin;
  const FieldSample s0 = field.sample(t, xi);
  if (!std::isfinite(s0.u)) throw TraceError(t, xi, "trace: non-finite initial sample at " + format_point(t, xi));
  ode::State<2> y{xi, s0.u};
  const double thr = merge_threshold(xi, 0.0);
  auto record = [&](double tt) {
    const double u = field.sample(tt, y[0]).u;
    path.samples.push_back({tt, y[0], u, y[1]});
    if (!path.merged_to_zero && std::abs(y[0]) <= thr) {
      path.merged_to_zero = true;
      path.merge_time = tt;
    }
  };
  record(t);
  for (std::size_t k = 1; k < times.size(); ++k) {
    integrator.advance(t, y, times[k]);
    t = times[k];
    record(t);
  }
  return path;
}

PathSample trace_to(const SolutionField& field, const PathSample& start, double t_end, double tol) {
  PathIntegrator integrator(field, tol);
  double t = start.t;
  ode::State<2> y{start.x, start.v};
  if (t_end < t) throw std::invalid_argument("trace_to: backward tracing is not supported");
  integrator.advance(t, y, t_end);
  return {t_end, y[0], field.sample(t_end, y[0]).u, y[1]};
}

PairTracker pair_from_paths(const CharacteristicPath& upper, const CharacteristicPath& lower) {
  if (!(upper.xi > lower.xi)) throw std::invalid_argument("pair_from_paths: need xi > eta");
  if (upper.samples.size() != lower.samples.size())
    throw std::invalid_argument("pair_from_paths: paths must share a time grid");
  PairTracker pair;
  pair.xi = upper.xi;
  pair.eta = lower.xi;
  pair.threshold = merge_threshold(pair.xi, pair.eta);
  const std::size_t n = upper.samples.size();
  pair.t.reserve(n);
  pair.f.reserve(n);
  pair.g.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = upper.samples[k];
    const auto& b = lower.samples[k];
    const double f = a.x - b.x;
    const double g = a.u - b.u;
    pair.t.push_back(a.t);
    pair.f.push_back(f);
    pair.g.push_back(g);
    if (!pair.meet_time && f <= pair.threshold) pair.meet_time = a.t;
    if (!pair.meet_time) pair.omega.push_back(g / f);
  }
  return pair;
}

PairTracker track_pair(const SolutionField& field, double xi, double eta, const TimeGrid& grid, double tol) {
  if (!(xi > eta)) throw std::invalid_argument("track_pair: need xi > eta");
  return pair_from_paths(trace(field, xi, grid, tol), trace(field, eta, grid, tol));
}

JacobianResult jacobian(const SolutionField& field, double xi, double t, double tol,
                        const JacobianOptions& opts) {
  if (!(t >= 0.0)) throw std::invalid_argument("jacobian: t must be >= 0");
  if (!(opts.h > 0.0)) throw std::invalid_argument("jacobian: h must be positive");
  JacobianResult out;
  if (t == 0.0) {
    out.value = 1.0;
    return out;
  }
  if (const auto fan = field.collapse()) {
    const bool inside = xi >= fan->lo && xi <= fan->hi;
    if (inside && t >= fan->time) {
      out.value = 0.0;
      out.note = "inside the collapse fan after the collapse time";
      return out;
    }
    if (inside && t < fan->time && (xi + opts.h > fan->hi || xi - opts.h < fan->lo)) {
      out.accuracy_warning = true;
      out.note = "difference pair straddles the collapse fan boundary";
    }
  }
  const std::size_t samples = opts.samples % 2 == 1 ? opts.samples : opts.samples + 1;
  const TimeGrid grid{0.0, t, samples};
  auto log_stretch = [&](double h) -> std::optional<double> {
    const PairTracker pair = track_pair(field, xi + h, xi - h, grid, tol);
    if (pair.meet_time) return std::nullopt;
    return simpson(pair.omega, grid.spacing());
  };
  const auto coarse = log_stretch(opts.h);
  const auto fine = log_stretch(0.5 * opts.h);
  if (!coarse || !fine) {
    out.value = 0.0;
    if (out.note.empty()) out.note = "difference pair merged";
    return out;
  }
  out.value = (4.0 * std::exp(*fine) - std::exp(*coarse)) / 3.0;
  return out;
}

double omega_lower_bound(double E0, double t, double T0) {
  if (!(E0 > 0.0)) throw std::out_of_range("omega_lower_bound: E0 must be positive");
  const double edge = T0 + std::numbers::pi / std::sqrt(2.0 * E0);
  if (!(t >= T0) || !(t < edge))
    throw std::out_of_range("omega_lower_bound: t outside [T0, T0 + pi/sqrt(2 E0))");
  const double v = std::sqrt(2.0 * E0) * std::tan(-std::sqrt(0.5 * E0) * (t - T0));
  if (!std::isfinite(v)) throw std::out_of_range("omega_lower_bound: t at the tangent pole");
  return v;
}

VerificationReport omega_inequality_check(const PairTracker& pair, double E0) {
  const auto& w = pair.omega;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < w.size(); ++k) {
    const double dt = pair.t[k + 1] - pair.t[k - 1];
    const double dw = (w[k + 1] - w[k - 1]) / dt;
    const double tol_fd = std::abs(w[k + 1] - 2.0 * w[k] + w[k - 1]) / (0.5 * dt);
    const double slack = dw + 0.5 * w[k] * w[k] + E0 + 10.0 * tol_fd;
    ++checked;
    if (slack < 0.0) {
      ++violations;
      worst = std::min(worst, slack);
    }
  }
  const double fraction = checked ? static_cast<double>(violations) / static_cast<double>(checked) : 0.0;
  std::ostringstream os;
  os.precision(6);
  os << "pair (" << pair.xi << ", " << pair.eta << "): " << violations << " of " << checked
     << " interior samples violate; most negative slack " << worst;
  return VerificationReport::make("omega_inequality", fraction, 0.01, checked, os.str());
}

VerificationReport post_blowup_bound_check(const PairTracker& pair, double E0, double T0, double delta0) {
  double worst = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < pair.omega.size(); ++k) {
    const double t = pair.t[k];
    if (t < T0 || t > T0 + delta0) continue;
    const double bound = omega_lower_bound(E0, t, T0);
    worst = std::max(worst, bound - pair.omega[k]);
    ++n;
  }
  return VerificationReport::make("post_blowup_omega_bound", worst, 1e-12, n,
                                  "max of (lower bound - omega) over [T0, T0 + delta0]");
}

VerificationReport merge_absorption_check(const PairTracker& pair) {
  std::size_t reseparations = 0;
  bool merged = false;
  for (double f : pair.f) {
    if (f <= pair.threshold) merged = true;
    else if (merged) ++reseparations;
  }
  return VerificationReport::make("merge_absorption", static_cast<double>(reseparations), 0.0, pair.f.size(),
                                  merged ? "pair merged" : "pair never merged");
}

VerificationReport slope_difference_check(const SolutionField& field, const CharacteristicPath& upper,
                                          const CharacteristicPath& lower, std::size_t times) {
  const PairTracker pair = pair_from_paths(upper, lower);
  const std::size_t usable = pair.omega.size();
  const std::size_t count = std::min(times, usable);
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = count > 1 ? i * (usable - 1) / (count - 1) : 0;
    const double t = pair.t[k];
    const double hi = upper.samples[k].x;
    const double lo = lower.samples[k].x;
    const auto kinks = field.kinks(t);
    const QuadratureResult w2 = integrate_piecewise(
        [&](double y) {
          const double w = field.sample(t, y).ux;
          return w * w;
        },
        lo, hi, kinks);
    const double lhs = pair.g[k] * pair.g[k];
    const double rhs = pair.f[k] * w2.value;
    worst = std::max(worst, (lhs - rhs) / std::max(rhs, 1e-300));
  }
  return VerificationReport::make("slope_difference_bound", std::max(worst, 0.0), 1e-9, count,
                                  "relative excess of (g^2) over f * int w^2");
}

}  // namespace peakon
