#include "peakon/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace peakon::grid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// Exact Riemann flux for f(u) = u^2 / 2.
double godunov(double ul, double ur) {
  if (ul >= ur) return 0.5 * std::max(ul * ul, ur * ur);
  if (ul > 0.0) return 0.5 * ul * ul;
  if (ur < 0.0) return 0.5 * ur * ur;
  return 0.0;
}

void check_finite(const GridState& s) {
  for (std::size_t i = 0; i < s.u.size(); ++i)
    if (!std::isfinite(s.u[i]))
      throw GridInstability(s.t, "non-finite velocity at node " + std::to_string(i) + " (x = " +
                                     std::to_string(s.x(i)) + ")");
}

std::vector<double> rhs(const GridState& s, const GridConfig& cfg) {
  const std::size_t n = s.u.size();
  const double dx = s.dx;
  const auto& u = s.u;
  auto at = [&](std::ptrdiff_t i) {
    return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? 0.0 : u[static_cast<std::size_t>(i)];
  };

  std::vector<double> flux(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    double ul = at(i), ur = at(i + 1);
    if (cfg.reconstruction == Reconstruction::minmod) {
      ul += 0.5 * minmod(at(i) - at(i - 1), at(i + 1) - at(i));
      ur -= 0.5 * minmod(at(i + 1) - at(i), at(i + 2) - at(i + 1));
    }
    flux[k] = godunov(ul, ur);
  }

  const HelmholtzResult h = helmholtz_solve(s);
  std::vector<double> out(n, 0.0);
  const double nu = cfg.eps / (dx * dx);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = -(flux[i] - flux[i - 1]) / dx - h.Px[i] + nu * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
  }
  return out;
}

}  // namespace

void GridConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("GridConfig: L must be positive");
  if (N < 3 || N % 2 == 0) throw std::invalid_argument("GridConfig: N must be odd and >= 3");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("GridConfig: eps must be >= 0");
  if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("GridConfig: cfl must lie in (0, 1)");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("GridConfig: t_end must be >= 0");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= t_end))
      throw std::invalid_argument("GridConfig: snapshot time " + std::to_string(t) + " outside [0, t_end]");
}

double GridState::x(std::size_t i) const {
  const auto m = static_cast<double>((u.size() - 1) / 2);
  return (static_cast<double>(i) - m) * dx;
}

GridInstability::GridInstability(double t, const std::string& what)
    : std::runtime_error("grid solver unstable at t = " + std::to_string(t) + ": " + what), t_(t) {}

HelmholtzResult helmholtz_solve(const GridState& state) {
  const std::size_t n = state.u.size();
  const double dx = state.dx;
  const auto& u = state.u;
  HelmholtzResult res;
  res.P.assign(n, 0.0);
  res.Px.assign(n, 0.0);
  if (n < 3) return res;
  const double off = 1.0 / (dx * dx);
  const double diag = 1.0 + 2.0 * off;
  res.ill_conditioned = 4.0 * off * std::numeric_limits<double>::epsilon() > 1e-6;

  // Thomas sweep on the interior unknowns 1..n-2.
  const std::size_t m = n - 2;
  std::vector<double> c(m), d(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    // One-sided slopes keep the source right at kinks, where centred
    // differences would see a zero derivative.
    const double up = (u[i + 1] - u[i]) / dx;
    const double um = (u[i] - u[i - 1]) / dx;
    const double f = u[i] * u[i] + 0.25 * (up * up + um * um);
    if (k == 0) {
      c[k] = -off / diag;
      d[k] = f / diag;
    } else {
      const double denom = diag + off * c[k - 1];
      c[k] = -off / denom;
      d[k] = (f + off * d[k - 1]) / denom;
    }
  }
  res.P[m] = d[m - 1];
  for (std::size_t k = m - 1; k-- > 0;) d[k] -= c[k] * d[k + 1];
  for (std::size_t k = 0; k < m; ++k) res.P[k + 1] = d[k];
  res.P[0] = 0.0;
  res.P[n - 1] = 0.0;

  for (std::size_t i = 1; i + 1 < n; ++i) res.Px[i] = (res.P[i + 1] - res.P[i - 1]) / (2.0 * dx);
  res.Px[0] = (res.P[1] - res.P[0]) / dx;
  res.Px[n - 1] = (res.P[n - 1] - res.P[n - 2]) / dx;
  return res;
}

double max_abs(const GridState& state) {
  double m = 0.0;
  for (double v : state.u) m = std::max(m, std::abs(v));
  return m;
}

double stable_dt(const GridState& state, const GridConfig& cfg) {
  const double umax = max_abs(state);
  if (!std::isfinite(umax)) throw GridInstability(state.t, "max|u| is not finite");
  double dt = umax > 0.0 ? state.dx / umax : kInf;
  if (cfg.eps > 0.0) dt = std::min(dt, state.dx * state.dx / (2.0 * cfg.eps));
  return cfg.cfl * dt;
}

GridState step(const GridState& state, const GridConfig& cfg, double dt_max) {
  check_finite(state);
  const double dt = std::min(stable_dt(state, cfg), dt_max);
  if (!std::isfinite(dt)) {
    GridState out = state;
    return out;
  }
  const std::size_t n = state.u.size();
  const auto k1 = rhs(state, cfg);
  GridState mid = state;
  for (std::size_t i = 0; i < n; ++i) mid.u[i] = state.u[i] + dt * k1[i];
  check_finite(mid);
  const auto k2 = rhs(mid, cfg);
  GridState out = state;
  out.t = state.t + dt;
  for (std::size_t i = 0; i < n; ++i) out.u[i] = 0.5 * state.u[i] + 0.5 * (mid.u[i] + dt * k2[i]);
  check_finite(out);
  return out;
}

double discrete_energy(const GridState& state) {
  double e = 0.0;
  const auto& u = state.u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e += u[i] * u[i];
    if (i + 1 < u.size()) {
      const double d = (u[i + 1] - u[i]) / state.dx;
      e += d * d;
    }
  }
  return e * state.dx;
}

GridState initial_state(const AntisymmetricIC& ic, const GridConfig& cfg) {
  cfg.validate();
  GridState s;
  s.dx = cfg.dx();
  s.u.assign(cfg.N, 0.0);
  const PeakonEnsemble ens = ic.initial_ensemble();
  const std::size_t m = (cfg.N - 1) / 2;
  for (std::size_t i = 1; i + 1 < cfg.N; ++i) {
    // Fill the left half and mirror so the data is exactly odd.
    if (i < m) {
      const double v = eval_u(ens, s.x(i));
      s.u[i] = v;
      s.u[cfg.N - 1 - i] = -v;
    }
  }
  s.u[m] = 0.0;
  return s;
}

RunResult run(const AntisymmetricIC& ic, const GridConfig& cfg) {
  cfg.validate();
  if (cfg.t_end > 10.0 * ic.T0())
    throw std::invalid_argument("grid::run: t_end exceeds 10 T0");
  RunResult res;
  res.experimental = cfg.eps == 0.0;
  res.tail_estimate = std::exp(-(cfg.L - ic.q0())) * ic.E0();
  if (!(res.tail_estimate <= cfg.tail_tol))
    throw std::invalid_argument("grid::run: domain too small, tail estimate " +
                                std::to_string(res.tail_estimate) + " exceeds " + std::to_string(cfg.tail_tol));

  std::vector<double> outputs = cfg.snapshot_times;
  outputs.push_back(cfg.t_end);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());

  GridState s = initial_state(ic, cfg);
  double e_prev = discrete_energy(s);
  res.energy_t.push_back(0.0);
  res.energy.push_back(e_prev);
  res.max_energy_increase = -kInf;
  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] <= 0.0) res.snapshots.push_back(s), ++next;
  while (next < outputs.size()) {
    const double target = outputs[next];
    GridState ns = step(s, cfg, target - s.t);
    if (target - ns.t <= 1e-12 * std::max(1.0, target)) ns.t = target;
    s = std::move(ns);
    ++res.steps;
    const double e = discrete_energy(s);
    res.max_energy_increase = std::max(res.max_energy_increase, e - e_prev);
    e_prev = e;
    res.energy_t.push_back(s.t);
    res.energy.push_back(e);
    while (next < outputs.size() && outputs[next] <= s.t) res.snapshots.push_back(s), ++next;
  }
  if (res.steps == 0) res.max_energy_increase = 0.0;
  return res;
}

double linf_error(const GridState& state, const SolutionField& exact) {
  double m = 0.0;
  for (std::size_t i = 0; i < state.u.size(); ++i)
    m = std::max(m, std::abs(state.u[i] - exact.sample(state.t, state.x(i)).u));
  return m;
}

double odd_asymmetry(const GridState& state) {
  double m = 0.0;
  const std::size_t n = state.u.size();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(state.u[i] + state.u[n - 1 - i]));
  return m;
}

GridField::GridField(std::vector<GridState> snapshots) : snaps_(std::move(snapshots)) {
  if (snaps_.empty()) throw std::invalid_argument("GridField: no snapshots");
  std::sort(snaps_.begin(), snaps_.end(), [](const GridState& a, const GridState& b) { return a.t < b.t; });
  for (const auto& s : snaps_) {
    if (s.u.size() < 3 || s.u.size() != snaps_.front().u.size() || s.dx != snaps_.front().dx)
      throw std::invalid_argument("GridField: snapshots must share one grid");
    Level lv;
    lv.t = s.t;
    lv.dx = s.dx;
    lv.u = s.u;
    const std::size_t n = s.u.size();
    lv.ux.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) lv.ux[i] = (s.u[i + 1] - s.u[i]) / s.dx;
    lv.ux[n - 1] = lv.ux[n - 2];
    HelmholtzResult h = helmholtz_solve(s);
    lv.P = std::move(h.P);
    lv.Px = std::move(h.Px);
    lv.energy = discrete_energy(s);
    levels_.push_back(std::move(lv));
  }
}

FieldSample GridField::sample_level(const Level& lv, double x) const {
  FieldSample out;
  out.x = x;
  const std::size_t n = lv.u.size();
  const double half = static_cast<double>((n - 1) / 2);
  const double s = x / lv.dx + half;
  if (!(s >= 0.0 && s <= static_cast<double>(n - 1))) return out;
  auto j = static_cast<std::size_t>(std::floor(s));
  if (j >= n - 1) j = n - 2;
  const double w = s - static_cast<double>(j);
  auto lerp = [&](const std::vector<double>& v) { return (1.0 - w) * v[j] + w * v[j + 1]; };
  out.u = lerp(lv.u);
  out.ux = lv.ux[j];
  out.P = lerp(lv.P);
  out.Px = lerp(lv.Px);
  return out;
}

FieldSample GridField::sample(double t, double x) const {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), t, [](const Level& l, double v) { return l.t < v; });
  FieldSample out;
  if (it == levels_.begin()) {
    out = sample_level(levels_.front(), x);
  } else if (it == levels_.end()) {
    out = sample_level(levels_.back(), x);
  } else {
    const Level& b = *it;
    const Level& a = *std::prev(it);
    const double w = (t - a.t) / (b.t - a.t);
    const FieldSample sa = sample_level(a, x), sb = sample_level(b, x);
    out.u = (1.0 - w) * sa.u + w * sb.u;
    out.ux = (1.0 - w) * sa.ux + w * sb.ux;
    out.P = (1.0 - w) * sa.P + w * sb.P;
    out.Px = (1.0 - w) * sa.Px + w * sb.Px;
  }
  out.t = t;
  out.x = x;
  return out;
}

double GridField::energy(double t) const {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), t, [](const Level& l, double v) { return l.t < v; });
  if (it == levels_.begin()) return levels_.front().energy;
  if (it == levels_.end()) return levels_.back().energy;
  const double w = (t - std::prev(it)->t) / (it->t - std::prev(it)->t);
  return (1.0 - w) * std::prev(it)->energy + w * it->energy;
}

}  // namespace peakon::grid
