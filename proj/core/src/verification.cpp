#include "peakon/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "peakon/ode.hpp"
#include "peakon/quadrature.hpp"

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool near_any(double x, const std::vector<double>& pts, double radius) {
  return std::any_of(pts.begin(), pts.end(), [&](double p) { return std::abs(x - p) <= radius; });
}

void require_smooth_window(const SolutionField& field, double lo, double hi, const char* who) {
  for (double b : field.breakpoints())
    if (b >= lo && b <= hi)
      throw std::invalid_argument(std::string(who) + ": time window [" + fmt_double(lo) + ", " +
                                  fmt_double(hi) + "] straddles the breakpoint t = " + fmt_double(b));
}

double max_abs_u(const SolutionField& field, double t, std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(field.sample(t, x).u));
  for (double k : field.kinks(t)) m = std::max(m, std::abs(field.sample(t, k).u));
  return m;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 0) out.back() = hi;
  return out;
}

VerificationReport oleinik_scan(const SolutionField& field, std::span<const double> t_grid,
                                std::span<const double> x_grid, double ceiling) {
  double C = -kInf;
  std::size_t n = 0;
  double arg_t = 0.0, arg_x = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("oleinik_scan: time grid must be strictly positive");
    const double weight = 1.0 + 1.0 / t;
    auto visit = [&](double x) {
      const double v = field.sample(t, x).ux / weight;
      ++n;
      if (!(v <= C)) {
        C = std::isnan(v) ? kInf : v;
        arg_t = t;
        arg_x = x;
      }
    };
    for (double x : x_grid) visit(x);
    for (double k : field.kinks(t)) visit(k);
  }
  if (n == 0) C = 0.0;
  return VerificationReport::make("oleinik", C, ceiling, n,
                                  "C = sup u_x/(1+1/t) = " + fmt_double(C) + " at t = " + fmt_double(arg_t) +
                                      ", x = " + fmt_double(arg_x));
}

EnergySeries energy_series(const SolutionField& field, std::span<const double> t_grid, double rel_tol) {
  EnergySeries out;
  const QuadratureResult e0 = energy_quadrature(field, 0.0, fd::kHalfWidth);
  out.E0 = e0.value;
  bool converged = e0.converged;
  double worst = 0.0;
  const double scale = out.E0 > 0.0 ? out.E0 : 1.0;
  for (double t : t_grid) {
    const QuadratureResult q = energy_quadrature(field, t, fd::kHalfWidth);
    converged = converged && q.converged;
    if (!out.energy.empty()) {
      const double drop = out.energy.back() - q.value;
      if (drop > out.largest_drop) {
        out.largest_drop = drop;
        out.drop_time = t;
      }
    }
    out.t.push_back(t);
    out.energy.push_back(q.value);
    worst = std::max(worst, (q.value - out.E0) / scale);
  }
  std::string details = "E0 = " + fmt_double(out.E0) + "; largest drop " + fmt_double(out.largest_drop) +
                        " before t = " + fmt_double(out.drop_time);
  if (!converged) {
    details += "; quadrature did not converge";
    worst = kInf;
  }
  out.report = VerificationReport::make("energy", worst, rel_tol, out.t.size(), details);
  return out;
}

namespace {

struct WeakFormNorm {
  double l2 = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

WeakFormNorm weak_form_norm(const SolutionField& field, double t, std::span<const double> x_grid,
                            double h) {
  if (!(h > 0.0)) throw std::invalid_argument("weak_form_residual: h_t must be positive");
  if (t - h < 0.0) throw std::invalid_argument("weak_form_residual: t - h_t must be >= 0");
  require_smooth_window(field, t - h, t + h, "weak_form_residual");
  const auto kinks = merged_kinks(field, {t - h, t, t + h});
  const double radius = fd::kKinkExclusion * h * (1.0 + max_abs_u(field, t, x_grid));
  const double dx = x_grid.size() > 1 ? (x_grid.back() - x_grid.front()) / static_cast<double>(x_grid.size() - 1)
                                      : 1.0;
  WeakFormNorm out;
  double sum = 0.0;
  for (double x : x_grid) {
    if (near_any(x, kinks, radius)) {
      ++out.excluded;
      continue;
    }
    const FieldSample s = field.sample(t, x);
    const double ut = (field.sample(t + h, x).u - field.sample(t - h, x).u) / (2.0 * h);
    const double r = ut + s.u * s.ux + s.Px;
    sum += r * r * dx;
    ++out.used;
  }
  out.l2 = std::sqrt(sum);
  return out;
}

}  // namespace

VerificationReport weak_form_residual(const SolutionField& field, double t, std::span<const double> x_grid,
                                      const WeakFormOptions& opts) {
  const WeakFormNorm n = weak_form_norm(field, t, x_grid, opts.h_t);
  return VerificationReport::make("weak_form", n.l2, opts.tol, n.used,
                                  "L2 residual at t = " + fmt_double(t) + ", h_t = " + fmt_double(opts.h_t) +
                                      "; " + std::to_string(n.excluded) + " kink-adjacent points excluded");
}

VerificationReport weak_form_negative_control(const SolutionField& solution, const SolutionField& control,
                                              double t, std::span<const double> x_grid,
                                              const WeakFormOptions& opts, double factor) {
  const WeakFormNorm a = weak_form_norm(solution, t, x_grid, opts.h_t);
  const WeakFormNorm b = weak_form_norm(control, t, x_grid, opts.h_t);
  const double ratio_metric = b.l2 > 0.0 ? factor * a.l2 / b.l2 : kInf;
  return VerificationReport::make("weak_form_control", ratio_metric, 1.0, a.used + b.used,
                                  "solution residual " + fmt_double(a.l2) + ", control residual " +
                                      fmt_double(b.l2) + ", required ratio " + fmt_double(factor));
}

std::vector<IdentityPoint> identity_residuals(const SolutionField& field, double t,
                                              std::span<const double> x_grid, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("identity_residuals: h must be positive");
  if (t - h < 0.0) throw std::invalid_argument("identity_residuals: t - h must be >= 0");
  require_smooth_window(field, t - h, t + h, "identity_residuals");
  const auto kinks_now = field.kinks(t);
  const auto kinks_window = merged_kinks(field, {t - h, t, t + h});
  const double space_radius = fd::kKinkExclusion * h;
  const double time_radius = fd::kKinkExclusion * h * (1.0 + max_abs_u(field, t, x_grid));
  std::vector<IdentityPoint> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    IdentityPoint ip;
    ip.x = x;
    if (near_any(x, kinks_now, space_radius) || near_any(x, kinks_window, time_radius)) {
      ip.excluded = true;
      out.push_back(ip);
      continue;
    }
    const FieldSample s = field.sample(t, x);
    const double Pl = field.sample(t, x - h).P;
    const double Pr = field.sample(t, x + h).P;
    const double Pxx = (Pr - 2.0 * s.P + Pl) / (h * h);
    ip.helmholtz = s.P - Pxx - (s.u * s.u + 0.5 * s.ux * s.ux);
    const double cum_plus = cumulative_u(field, t + h, x, fd::kHalfWidth).value;
    const double cum_minus = cumulative_u(field, t - h, x, fd::kHalfWidth).value;
    ip.cumulative = (cum_plus - cum_minus) / (2.0 * h) + s.P + 0.5 * s.u * s.u;
    out.push_back(ip);
  }
  return out;
}

VerificationReport identity_suite(const SolutionField& field, double t, std::span<const double> x_grid,
                                  double tol, double h) {
  const auto pts = identity_residuals(field, t, x_grid, h);
  double helm = 0.0, cum = 0.0;
  std::size_t used = 0, excluded = 0;
  for (const auto& p : pts) {
    if (p.excluded) {
      ++excluded;
      continue;
    }
    ++used;
    helm = std::max(helm, std::abs(p.helmholtz));
    cum = std::max(cum, std::abs(p.cumulative));
  }
  return VerificationReport::make("identity_suite", std::max(helm, cum), tol, used,
                                  "helmholtz " + fmt_double(helm) + ", cumulative " + fmt_double(cum) + "; " +
                                      std::to_string(excluded) + " kink-adjacent points excluded");
}

double alpha_at(const SolutionField& field, double t, double x) {
  return field.sample(t, x).ux - cumulative_u(field, t, x, fd::kHalfWidth).value;
}

VerificationReport alpha_residual(const SolutionField& field, const CharacteristicPath& path,
                                  std::span<const double> times, double tol, double h) {
  if (path.samples.empty()) throw std::invalid_argument("alpha_residual: empty path");
  double worst = 0.0;
  std::size_t used = 0, excluded = 0;
  for (double tau : times) {
    require_smooth_window(field, tau - h, tau + h, "alpha_residual");
    auto it = std::upper_bound(path.samples.begin(), path.samples.end(), tau - h,
                               [](double v, const PathSample& s) { return v < s.t; });
    if (it == path.samples.begin())
      throw std::invalid_argument("alpha_residual: t - h precedes the start of the path");
    const PathSample& start = *std::prev(it);
    const PathSample before = trace_to(field, start, tau - h, path.tolerance);
    const PathSample mid = trace_to(field, before, tau, path.tolerance);
    const PathSample after = trace_to(field, mid, tau + h, path.tolerance);

    const auto kinks = merged_kinks(field, {tau - h, tau, tau + h});
    const double radius = fd::kKinkExclusion * h * (1.0 + std::abs(mid.u));
    if (near_any(mid.x, kinks, radius)) {
      ++excluded;
      continue;
    }
    const FieldSample s = field.sample(tau, mid.x);
    const double da = (alpha_at(field, after.t, after.x) - alpha_at(field, before.t, before.x)) / (2.0 * h);
    const double rhs = -0.5 * s.ux * s.ux + 0.5 * s.u * s.u;
    worst = std::max(worst, std::abs(da - rhs));
    ++used;
  }
  return VerificationReport::make("alpha_evolution", worst, tol, used,
                                  "path from xi = " + fmt_double(path.xi) + "; " + std::to_string(excluded) +
                                      " kink-crossing times excluded");
}

void RiccatiProblem::validate() const {
  if (!(Kg >= 0.0)) throw std::invalid_argument("RiccatiProblem: Kg must be >= 0");
  if (!(Kg < K0)) throw std::invalid_argument("RiccatiProblem: need Kg < K0");
  if (!(delta0 > 0.0)) throw std::invalid_argument("RiccatiProblem: delta0 must be positive");
  if (!source) throw std::invalid_argument("RiccatiProblem: source is not set");
}

bool RiccatiProblem::in_admissible_regime() const { return delta0_admissible(K0, delta0); }

RiccatiEscape::RiccatiEscape(double escape_time)
    : std::runtime_error("riccati_solve: w escapes to -infinity near t = " + std::to_string(escape_time)),
      escape_time_(escape_time) {}

RiccatiSolution riccati_solve(const RiccatiProblem& prob, double tol) {
  prob.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("riccati_solve: tol must be positive");
  RiccatiSolution sol;
  sol.bound = 3.0 * prob.Kg * prob.delta0;
  sol.in_admissible_regime = prob.in_admissible_regime();
  sol.samples.push_back({prob.T0, 0.0});

  ode::Settings settings;
  settings.tol = tol;
  settings.max_step = prob.delta0 / 64.0;
  double t = prob.T0;
  ode::State<1> w{0.0};
  auto rhs = [&](double tt, const ode::State<1>& s) { return ode::State<1>{prob.source(tt) - 0.5 * s[0] * s[0]}; };
  try {
    ode::integrate<1>(rhs, t, w, prob.T0 + prob.delta0, settings, [&](double tt, const ode::State<1>& s) {
      if (std::abs(s[0]) > 1e100) throw RiccatiEscape(tt);
      sol.samples.push_back({tt, s[0]});
      sol.max_abs_w = std::max(sol.max_abs_w, std::abs(s[0]));
    });
  } catch (const ode::StepSizeUnderflow& e) {
    throw RiccatiEscape(e.last_time());
  } catch (const ode::NonFiniteState& e) {
    throw RiccatiEscape(e.time());
  }
  sol.bound_holds = sol.max_abs_w <= sol.bound;
  return sol;
}

VerificationReport riccati_bound_report(const RiccatiSolution& sol) {
  if (!sol.in_admissible_regime)
    return VerificationReport::make("riccati_bound", kInf, 0.0, sol.samples.size(),
                                    "delta0 outside the smallness regime; bound not applicable");
  return VerificationReport::make("riccati_bound", std::max(0.0, sol.max_abs_w - sol.bound), 0.0,
                                  sol.samples.size(),
                                  "max|w| = " + fmt_double(sol.max_abs_w) + ", 3 Kg delta0 = " + fmt_double(sol.bound));
}

ContractionSequence contraction_sequence(double E0, double delta0, std::size_t n, double epsilon) {
  if (!(E0 > 0.0)) throw std::invalid_argument("contraction_sequence: E0 must be positive");
  if (!(delta0 >= 0.0)) throw std::invalid_argument("contraction_sequence: delta0 must be >= 0");
  if (n < 1) throw std::invalid_argument("contraction_sequence: n must be >= 1");
  ContractionSequence seq;
  seq.E0 = E0;
  seq.delta0 = delta0;
  seq.D.reserve(n);
  seq.D.push_back(3.0 * E0);
  const double d2 = delta0 * delta0;
  for (std::size_t i = 1; i < n; ++i) seq.D.push_back(18.0 * seq.D.back() * seq.D.back() * d2);
  seq.contraction = 18.0 * seq.D.front() * d2 < 1.0;
  seq.diverges = !seq.contraction;
  seq.below_epsilon = seq.D.back() < epsilon;
  return seq;
}

VerificationReport p_bounds_check(const SolutionField& field, std::span<const double> t_grid,
                                  std::span<const double> x_grid, double tol) {
  double excess = -kInf;
  std::size_t n = 0;
  for (double t : t_grid) {
    const double half_energy = 0.5 * field.energy(t);
    for (double x : x_grid) {
      const FieldSample s = field.sample(t, x);
      excess = std::max(excess, std::max(std::abs(s.P), std::abs(s.Px)) - half_energy);
      ++n;
    }
  }
  if (n == 0) excess = 0.0;
  return VerificationReport::make("p_bounds", std::max(0.0, excess), tol, n,
                                  "max(|P|,|P_x|) - E/2 peaks at " + fmt_double(excess));
}

bool delta0_admissible(double E0, double delta0) {
  const double a = std::sqrt(0.5 * E0) * delta0;
  return a < 0.5 * std::numbers::pi && std::tan(a) <= 3.0 * a;
}

double default_delta0(double E0) {
  if (!(E0 > 0.0)) throw std::invalid_argument("default_delta0: E0 must be positive");
  const double d = std::min(0.1, 0.1 / std::sqrt(E0));
  if (!delta0_admissible(E0, d)) throw std::logic_error("default_delta0: smallness condition fails");
  return d;
}

}  // namespace peakon
