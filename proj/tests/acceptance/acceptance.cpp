// Acceptance runner: one line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "acceptance_determinism.hpp"
#include "peakon/characteristics.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/grid_solver.hpp"
#include "peakon/quadrature.hpp"
#include "peakon/verification.hpp"

using namespace peakon;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const std::vector<std::pair<double, double>> kICs = {{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}};

Outcome closed_form_conservation() {
  double worst = 0.0;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    for (double t : linspace(0.0, ic.T0() * (1.0 - 1e-6), 1000))
      worst = std::max(worst, invariant_residual(ic, closed_form_state(ic, t)));
  }
  return {worst <= 1e-10, "max relative invariant defect " + sci(worst) + " (tol 1e-10)"};
}

Outcome ode_equivalence() {
  double worst = 0.0;
  std::size_t n = 0;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    for (const auto& s : integrate_pq(ic, ic.T0() - 1e-3, 1e-10)) {
      const auto c = closed_form_state(ic, s.t);
      worst = std::max({worst, std::abs(s.p - c.p) / std::abs(c.p), std::abs(s.q - c.q) / std::abs(c.q)});
      ++n;
    }
  }
  return {worst <= 1e-7, "max relative deviation " + sci(worst) + " over " + std::to_string(n) +
                             " steps (tol 1e-7)"};
}

Outcome field_energy() {
  double pre = 0.0, post = 0.0, rise = 0.0;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    for (double t : linspace(0.0, ic.T0() * (1.0 - 1e-4), 40)) {
      const auto q = energy_quadrature(field, t);
      pre = std::max(pre, q.converged ? std::abs(q.value - ic.E0()) / ic.E0() : INFINITY);
    }
    for (double t : linspace(ic.T0(), 2.0 * ic.T0(), 10)) post = std::max(post, std::abs(energy_quadrature(field, t).value));
    const auto series = energy_series(field, linspace(0.0, 2.0 * ic.T0(), 81));
    rise = std::max(rise, series.report.max_residual);
  }
  const bool ok = pre <= 1e-6 && post == 0.0 && rise <= 1e-6;
  return {ok, "pre-T0 rel error " + sci(pre) + " (tol 1e-6), post-T0 " + sci(post) + ", max (E-E0)/E0 " + sci(rise)};
}

Outcome boundary_characteristics() {
  double edge = 0.0, centre = 0.0;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    const TimeGrid grid{0.0, ic.T0() - 1e-3, 401};
    const auto up = trace(field, q0, grid, 1e-10);
    const auto lo = trace(field, -q0, grid, 1e-10);
    const auto mid = trace(field, 0.0, grid, 1e-10);
    for (std::size_t k = 0; k < up.samples.size(); ++k) {
      const double q = closed_form_state(ic, up.samples[k].t).q;
      edge = std::max({edge, std::abs(up.samples[k].x - q), std::abs(lo.samples[k].x + q)});
      centre = std::max(centre, std::abs(mid.samples[k].x));
    }
  }
  return {edge <= 1e-6 && centre <= 1e-12,
          "max |x_{+-q0} -+ q| " + sci(edge) + " (tol 1e-6), max |x_0| " + sci(centre) + " (tol 1e-12)"};
}

Outcome concentration() {
  double worst = 0.0;
  bool absorbed = true;
  std::string failing;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    const std::vector<double> starts = {-0.75 * q0, -0.3 * q0, 0.2 * q0, 0.6 * q0};
    for (double xi : starts) {
      const auto end = trace_to(field, {0.0, xi, field.u(0.0, xi), field.u(0.0, xi)}, ic.T0() - 1e-3, 1e-10);
      worst = std::max(worst, std::abs(end.x) / q0);
    }
    const double delta0 = default_delta0(ic.E0());
    const TimeGrid grid{0.0, ic.T0() + delta0, 801};
    for (auto [a, b] : {std::pair{starts[3], starts[2]}, {starts[1], starts[0]}, {starts[2], starts[1]}}) {
      const auto pair = track_pair(field, a, b, grid, 1e-10);
      const auto rep = merge_absorption_check(pair);
      if (!rep.passed || !pair.meet_time) {
        absorbed = false;
        failing = rep.details;
      }
    }
  }
  return {worst <= 1e-2 && absorbed, "max |x_xi(T0-1e-3)|/q0 " + sci(worst) + " (tol 1e-2); merge absorption " +
                                         (absorbed ? "holds" : "fails: " + failing)};
}

std::vector<std::pair<double, double>> outside_pairs(double q0) {
  return {{q0 + 0.5, q0 + 0.1}, {q0 + 2.0, q0 + 1.0}, {-q0 - 0.1, -q0 - 0.6},
          {-q0 - 1.0, -q0 - 3.0}, {q0 + 0.3, -q0 - 0.3}};
}

Outcome non_crossing() {
  std::size_t met = 0, total = 0;
  double closest = INFINITY;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    const double delta0 = default_delta0(ic.E0());
    for (auto [a, b] : outside_pairs(q0)) {
      const auto pair = track_pair(field, a, b, {0.0, ic.T0() + delta0, 801}, 1e-10);
      ++total;
      if (pair.meet_time) ++met;
      for (double f : pair.f) closest = std::min(closest, f);
    }
  }
  return {met == 0, std::to_string(met) + " of " + std::to_string(total) +
                        " outside pairs met; smallest separation " + sci(closest)};
}

Outcome omega_inequality() {
  double worst = 0.0;
  std::size_t n = 0;
  bool ok = true;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    const double delta0 = default_delta0(ic.E0());
    for (auto [a, b] : outside_pairs(q0)) {
      const auto pair = track_pair(field, a, b, {0.0, ic.T0() + delta0, 2001}, 1e-10);
      const auto rep = omega_inequality_check(pair, ic.E0());
      ok = ok && rep.passed;
      worst = std::max(worst, rep.max_residual);
      n += rep.samples;
    }
  }
  return {ok, "worst violating fraction " + sci(worst) + " over " + std::to_string(n) + " samples (tol 1e-2)"};
}

Outcome riccati_oracle() {
  double closed_err = 0.0;
  for (double Kg : {0.1, 0.5, 1.5}) {
    for (int sign : {1, -1}) {
      RiccatiProblem prob;
      prob.Kg = Kg;
      prob.K0 = 2.0 * Kg;
      prob.T0 = 1.25;
      prob.delta0 = 0.5;
      prob.source = [=](double) { return sign * Kg; };
      const double r = std::sqrt(Kg / 2.0);
      const auto sol = riccati_solve(prob, 1e-12);
      for (const auto& s : sol.samples) {
        const double tau = s.t - prob.T0;
        const double exact = sign > 0 ? std::sqrt(2.0 * Kg) * std::tanh(r * tau) : -std::sqrt(2.0 * Kg) * std::tan(r * tau);
        closed_err = std::max(closed_err, std::abs(s.w - exact));
      }
    }
  }
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t held = 0;
  double tightest = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double K0 = 0.25 + 4.0 * unit(rng);
    const double Kg = K0 * (0.05 + 0.9 * unit(rng));
    std::array<double, 4> amp{}, freq{}, phase{};
    double norm = 0.0;
    for (int j = 0; j < 4; ++j) {
      amp[j] = 2.0 * unit(rng) - 1.0;
      freq[j] = 1.0 + 60.0 * unit(rng);
      phase[j] = 2.0 * std::numbers::pi * unit(rng);
      norm += std::abs(amp[j]);
    }
    RiccatiProblem prob;
    prob.Kg = Kg;
    prob.K0 = K0;
    prob.T0 = 2.0 * unit(rng);
    prob.delta0 = default_delta0(K0);
    prob.source = [=](double t) {
      double g = 0.0;
      for (int j = 0; j < 4; ++j) g += amp[j] * std::sin(freq[j] * t + phase[j]);
      return Kg * g / norm;
    };
    if (!prob.in_admissible_regime()) continue;
    const auto sol = riccati_solve(prob, 1e-10);
    if (sol.bound_holds) ++held;
    tightest = std::max(tightest, sol.max_abs_w / sol.bound);
  }
  return {closed_err <= 1e-8 && held == 50, "closed-form error " + sci(closed_err) + " (tol 1e-8); bound held for " +
                                                std::to_string(held) + "/50 random sources, max |w|/bound " +
                                                sci(tightest)};
}

Outcome contraction() {
  const auto seq = contraction_sequence(1.0, 0.1, 6);
  bool decreasing = true;
  for (std::size_t i = 1; i < seq.D.size(); ++i) decreasing = decreasing && seq.D[i] < seq.D[i - 1];
  const bool head = std::abs(seq.D[0] - 3.0) <= 1e-14 && std::abs(seq.D[1] - 1.62) <= 1e-14 &&
                    std::abs(seq.D[2] - 0.472392) <= 1e-14;
  const auto wide = contraction_sequence(1.0, 1.0, 6);
  return {decreasing && head && seq.D[4] < 1e-3 && seq.contraction && wide.diverges,
          "D = 3, 1.62, " + sci(seq.D[2]) + ", " + sci(seq.D[3]) + ", " + sci(seq.D[4]) +
              (decreasing ? "; strictly decreasing" : "; NOT decreasing") +
              (wide.diverges ? "; delta0=1 diverges" : "; delta0=1 divergence flag missing")};
}

Outcome uniform_p_bounds() {
  double worst = 0.0;
  bool ok = true;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    const auto rep = p_bounds_check(field, linspace(0.0, ic.T0() * (1.0 - 1e-6), 61), linspace(-6.0, 6.0, 601), 1e-9);
    ok = ok && rep.passed;
    worst = std::max(worst, rep.max_residual);
  }
  return {ok, "max excess over E0/2 " + sci(worst) + " (tol 1e-9)"};
}

Outcome identity_suite_check() {
  double ident = 0.0, alpha = 0.0;
  bool ok = true;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    for (double t : {0.25 * ic.T0(), 0.5 * ic.T0(), 0.9 * ic.T0()}) {
      const auto rep = identity_suite(field, t, linspace(-5.0, 5.0, 401), 1e-3 * ic.E0());
      ok = ok && rep.passed;
      ident = std::max(ident, rep.max_residual / ic.E0());
    }
    const auto path = trace(field, 2.0 * q0 + 0.5, {0.0, ic.T0() * 0.95, 201}, 1e-11);
    const auto rep = alpha_residual(field, path, linspace(0.05 * ic.T0(), 0.9 * ic.T0(), 12), 1e-4 * ic.E0());
    ok = ok && rep.passed && rep.samples > 0;
    alpha = std::max(alpha, rep.max_residual / ic.E0());
  }
  return {ok, "identity residual / E0 " + sci(ident) + " (tol 1e-3); alpha residual / E0 " + sci(alpha) + " (tol 1e-4)"};
}

Outcome negative_control() {
  double worst = INFINITY;
  bool ok = true;
  for (auto [p0, q0] : kICs) {
    const auto ic = make_ic(p0, q0);
    const ClosedFormField field(ic);
    const StaticEnsembleField frozen(ic.initial_ensemble());
    for (double t : {0.1 * ic.T0(), 0.5 * ic.T0()}) {
      const auto rep = weak_form_negative_control(field, frozen, t, linspace(-6.0, 6.0, 1201));
      ok = ok && rep.passed;
      worst = std::min(worst, 10.0 / rep.max_residual);
    }
  }
  return {ok, "smallest control/solution residual ratio " + sci(worst) + " (need >= 10)"};
}

Outcome grid_solver_check() {
  const auto ic = make_ic(1.0, 1.0);
  const ClosedFormField field(ic);
  grid::GridConfig cfg;
  cfg.L = 20.0;
  cfg.eps = 1e-3;
  cfg.t_end = 0.5 * ic.T0();
  cfg.N = 4001;
  const auto coarse = grid::run(ic, cfg);
  cfg.N = 8001;
  const auto fine = grid::run(ic, cfg);
  const double e1 = grid::linf_error(coarse.snapshots.back(), field);
  const double e2 = grid::linf_error(fine.snapshots.back(), field);
  const double ratio = e1 / e2;
  const double growth = std::max(coarse.max_energy_increase, fine.max_energy_increase);

  grid::GridConfig post;
  post.N = 4001;
  post.t_end = ic.T0() + 0.5;
  post.eps = 1e-2;
  const double m_hi = grid::max_abs(grid::run(ic, post).snapshots.back());
  post.eps = 1e-3;
  const auto low = grid::run(ic, post);
  const double m_lo = grid::max_abs(low.snapshots.back());
  const double growth_post = low.max_energy_increase;

  const bool ok = ratio >= 1.5 && growth <= 0.0 && growth_post <= 0.0 && m_lo < m_hi;
  return {ok, "Linf error N=4001 " + sci(e1) + ", N=8001 " + sci(e2) + ", ratio " + sci(ratio) +
                  " (need >= 1.5); max energy increase per step " + sci(std::max(growth, growth_post)) +
                  "; max|u|(T0+0.5) eps=1e-2 " + sci(m_hi) + ", eps=1e-3 " + sci(m_lo)};
}

Outcome determinism() {
  const auto res = acceptance::check_determinism();
  return {res.identical, res.detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form conservation", closed_form_conservation},
      {"ODE/closed-form equivalence", ode_equivalence},
      {"field energy", field_energy},
      {"boundary characteristics", boundary_characteristics},
      {"concentration", concentration},
      {"non-crossing outside the fan", non_crossing},
      {"omega differential inequality", omega_inequality},
      {"Riccati oracle", riccati_oracle},
      {"contraction", contraction},
      {"uniform P bounds", uniform_p_bounds},
      {"identity suite", identity_suite_check},
      {"weak-form negative control", negative_control},
      {"grid solver", grid_solver_check},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
