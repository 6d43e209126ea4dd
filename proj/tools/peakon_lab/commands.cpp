#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "output.hpp"
#include "peakon/characteristics.hpp"
#include "peakon/dynamics.hpp"
#include "peakon/grid_solver.hpp"
#include "peakon/quadrature.hpp"
#include "peakon/verification.hpp"
#include "svg.hpp"

namespace peakon::lab {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  AntisymmetricIC ic;
  ClosedFormField field;
  double delta0;
};

Scenario scenario(const ScenarioConfig& cfg) {
  const auto ic = make_ic(cfg.p0, cfg.q0);
  const double delta0 = cfg.delta0 > 0.0 ? cfg.delta0 : default_delta0(ic.E0());
  return {ic, ClosedFormField(ic), delta0};
}

fs::path emit(CommandResult& res, const ScenarioConfig& cfg, const std::string& name, const std::string& content) {
  const fs::path p = resolve_output_dir(cfg) / name;
  atomic_write(p, content);
  res.files.push_back(p);
  return p;
}

void emit_report(CommandResult& res, const ScenarioConfig& cfg, const std::string& name) {
  emit(res, cfg, name, dump_json(suite_to_json(res.reports)));
}

std::vector<double> default_starts(double q0) {
  return {-2.0 * q0, -q0 - 0.5, -q0, -0.5 * q0, 0.0, 0.5 * q0, q0, q0 + 0.5, 2.0 * q0};
}

}  // namespace

std::function<double(double)> random_source(std::uint64_t seed, double Kg) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return std::generate_canonical<double, 53>(rng); };
  std::array<double, 4> amp{}, freq{}, phase{};
  double norm = 0.0;
  for (int j = 0; j < 4; ++j) {
    amp[j] = 2.0 * unit() - 1.0;
    freq[j] = 1.0 + 60.0 * unit();
    phase[j] = 2.0 * std::numbers::pi * unit();
    norm += std::abs(amp[j]);
  }
  if (norm == 0.0) norm = 1.0;
  return [=](double t) {
    double g = 0.0;
    for (int j = 0; j < 4; ++j) g += amp[j] * std::sin(freq[j] * t + phase[j]);
    return Kg * g / norm;
  };
}

CommandResult closed_form_command(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  CommandResult res;
  CsvWriter csv({"t", "p", "q", "invariant_residual"});
  double worst = 0.0;
  for (double t : linspace(0.0, sc.ic.T0() * (1.0 - 1e-6), cfg.samples)) {
    const auto s = closed_form_state(sc.ic, t);
    const double r = invariant_residual(sc.ic, s);
    worst = std::max(worst, r);
    csv.row({t, s.p, s.q, r});
  }
  emit(res, cfg, "closed_form.csv", csv.str());
  if (!cfg.profile_times.empty()) {
    CsvWriter prof({"t", "x", "u"});
    for (double t : cfg.profile_times)
      for (double x : linspace(cfg.x_min, cfg.x_max, cfg.x_samples)) prof.row({t, x, sc.field.u(t, x)});
    emit(res, cfg, "profile.csv", prof.str());
  }
  res.reports.push_back(VerificationReport::make(
      "invariant", worst, 1e-10, cfg.samples,
      fmt::format("H0 = {}, T0 = {}", format17(sc.ic.H0()), format17(sc.ic.T0()))));
  emit_report(res, cfg, "closed_form_report.json");
  return res;
}

CommandResult ode_command(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  const double t_end = cfg.t_end > 0.0 ? cfg.t_end : sc.ic.T0() - 1e-3;
  CommandResult res;
  CsvWriter csv({"t", "p", "q", "p_closed", "q_closed", "rel_error"});
  double worst = 0.0;
  const auto traj = integrate_pq(sc.ic, t_end, cfg.tol);
  for (const auto& s : traj) {
    const auto c = closed_form_state(sc.ic, s.t);
    const double e = std::max(std::abs(s.p - c.p) / std::abs(c.p), std::abs(s.q - c.q) / std::abs(c.q));
    worst = std::max(worst, e);
    csv.row({s.t, s.p, s.q, c.p, c.q, e});
  }
  emit(res, cfg, "ode.csv", csv.str());
  res.reports.push_back(VerificationReport::make("ode_equivalence", worst, 1e-7, traj.size(),
                                                 "relative deviation from the closed form up to t = " +
                                                     format17(t_end)));
  emit_report(res, cfg, "ode_report.json");
  return res;
}

CommandResult chars_command(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  const double q0 = sc.ic.q0();
  const TimeGrid grid{0.0, cfg.t_end > 0.0 ? cfg.t_end : sc.ic.T0() + sc.delta0, cfg.t_samples};
  const auto starts = cfg.xi.empty() ? default_starts(q0) : cfg.xi;
  CommandResult res;

  std::map<double, CharacteristicPath> paths;
  CsvWriter csv({"xi", "t", "x", "u", "v"});
  double lagrange = 0.0;
  std::size_t lagrange_n = 0;
  for (double xi : starts) {
    auto path = trace(sc.field, xi, grid, cfg.tol);
    for (const auto& s : path.samples) {
      csv.row({xi, s.t, s.x, s.u, s.v});
      lagrange = std::max(lagrange, std::abs(s.v - s.u));
      ++lagrange_n;
    }
    paths.emplace(xi, std::move(path));
  }
  emit(res, cfg, "chars.csv", csv.str());

  const std::vector<std::pair<double, double>> outside = {{q0 + 0.5, q0 + 0.1}, {-q0 - 0.1, -q0 - 0.5}};
  const std::vector<std::pair<double, double>> inside = {{0.5 * q0, -0.5 * q0}};
  CsvWriter pcsv({"xi", "eta", "t", "f", "g", "omega"});
  auto emit_pair = [&](const PairTracker& p) {
    for (std::size_t k = 0; k < p.omega.size(); ++k) pcsv.row({p.xi, p.eta, p.t[k], p.f[k], p.g[k], p.omega[k]});
  };
  auto worst_of = [](std::vector<VerificationReport> reps, const std::string& name) {
    VerificationReport w = reps.front();
    for (const auto& r : reps)
      if (!r.passed || r.max_residual > w.max_residual) w = r;
    w.check_name = name;
    return w;
  };
  std::vector<VerificationReport> omega_reps, post_reps, merge_reps, slope_reps;
  for (auto [a, b] : outside) {
    const auto pa = trace(sc.field, a, grid, cfg.tol), pb = trace(sc.field, b, grid, cfg.tol);
    const auto pair = pair_from_paths(pa, pb);
    emit_pair(pair);
    omega_reps.push_back(omega_inequality_check(pair, sc.ic.E0()));
    post_reps.push_back(post_blowup_bound_check(pair, sc.ic.E0(), sc.ic.T0(), sc.delta0));
    slope_reps.push_back(slope_difference_check(sc.field, pa, pb));
  }
  for (auto [a, b] : inside) {
    const auto pair = track_pair(sc.field, a, b, grid, cfg.tol);
    emit_pair(pair);
    merge_reps.push_back(merge_absorption_check(pair));
  }
  emit(res, cfg, "pairs.csv", pcsv.str());

  if (cfg.check_enabled("lagrangian_velocity"))
    res.reports.push_back(VerificationReport::make("lagrangian_velocity", lagrange, 1e3 * cfg.tol,
                                                   lagrange_n, "max |v - u| along traced paths"));
  if (cfg.check_enabled("omega_inequality")) res.reports.push_back(worst_of(omega_reps, "omega_inequality"));
  if (cfg.check_enabled("post_blowup_bound")) res.reports.push_back(worst_of(post_reps, "post_blowup_bound"));
  if (cfg.check_enabled("slope_difference")) res.reports.push_back(worst_of(slope_reps, "slope_difference"));
  if (cfg.check_enabled("merge_absorption")) res.reports.push_back(worst_of(merge_reps, "merge_absorption"));
  emit_report(res, cfg, "chars_report.json");
  return res;
}

std::vector<VerificationReport> verification_suite(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  const auto& ic = sc.ic;
  const auto& field = sc.field;
  const double T0 = ic.T0(), E0 = ic.E0(), q0 = ic.q0();
  const auto xs = linspace(cfg.x_min, cfg.x_max, cfg.x_samples);
  std::vector<VerificationReport> out;
  auto on = [&](const char* name) { return cfg.check_enabled(name); };

  if (on("oleinik")) {
    auto ts = linspace(0.1 * T0, T0 * (1.0 - 1e-3), cfg.t_samples);
    for (double t : linspace(T0, T0 + sc.delta0, 5)) ts.push_back(t);
    out.push_back(oleinik_scan(field, ts, xs, E0 / (2.0 * ic.p0()) + 1e-9));
  }
  if (on("energy")) out.push_back(energy_series(field, linspace(0.0, 2.0 * T0, cfg.t_samples)).report);
  if (on("weak_form")) {
    VerificationReport worst;
    for (double t : {0.25 * T0, 0.5 * T0}) {
      auto r = weak_form_residual(field, t, xs);
      if (worst.check_name.empty() || !r.passed || r.max_residual > worst.max_residual) worst = r;
    }
    out.push_back(worst);
  }
  if (on("weak_form_control")) {
    const StaticEnsembleField frozen(ic.initial_ensemble());
    out.push_back(weak_form_negative_control(field, frozen, 0.5 * T0, xs));
  }
  if (on("identity_suite")) out.push_back(identity_suite(field, 0.5 * T0, xs, 1e-3 * E0));
  if (on("alpha_evolution")) {
    const auto path = trace(field, 2.0 * q0 + 0.5, {0.0, 0.95 * T0, 201}, cfg.tol);
    out.push_back(alpha_residual(field, path, linspace(0.05 * T0, 0.9 * T0, 12), 1e-4 * E0));
  }
  if (on("p_bounds")) out.push_back(p_bounds_check(field, linspace(0.0, T0 * (1.0 - 1e-6), cfg.t_samples), xs));
  if (on("riccati_bound")) {
    RiccatiProblem prob;
    prob.Kg = 0.5 * E0;
    prob.K0 = E0;
    prob.T0 = T0;
    prob.delta0 = sc.delta0;
    prob.source = random_source(cfg.seed, prob.Kg);
    out.push_back(riccati_bound_report(riccati_solve(prob, cfg.tol)));
  }
  const bool want_pairs = on("omega_inequality") || on("post_blowup_bound") || on("merge_absorption") ||
                          on("slope_difference") || on("lagrangian_velocity");
  if (want_pairs) {
    ScenarioConfig sub = cfg;
    sub.output_dir = (resolve_output_dir(cfg) / "verify_chars").string();
    sub.xi.clear();
    sub.t_end = 0.0;
    sub.t_samples = std::max<std::size_t>(cfg.t_samples, 401);
    for (auto& r : chars_command(sub).reports) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.check_name < b.check_name; });
  return out;
}

CommandResult verify_command(const ScenarioConfig& cfg) {
  CommandResult res;
  res.reports = verification_suite(cfg);
  const auto sc = scenario(cfg);
  CsvWriter csv({"t", "energy"});
  for (double t : linspace(0.0, 2.0 * sc.ic.T0(), cfg.t_samples)) csv.row({t, energy_quadrature(sc.field, t).value});
  emit(res, cfg, "energy.csv", csv.str());
  emit_report(res, cfg, "verify.json");
  return res;
}

CommandResult riccati_command(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  RiccatiProblem prob;
  prob.Kg = cfg.kg;
  prob.K0 = cfg.k0;
  prob.T0 = sc.ic.T0();
  prob.delta0 = cfg.delta0 > 0.0 ? cfg.delta0 : default_delta0(cfg.k0);
  const double Kg = cfg.kg;
  if (cfg.source == "const") prob.source = [Kg](double) { return Kg; };
  else if (cfg.source == "neg_const") prob.source = [Kg](double) { return -Kg; };
  else prob.source = random_source(cfg.seed, Kg);
  const auto sol = riccati_solve(prob, cfg.tol);
  CommandResult res;
  CsvWriter csv({"t", "w"});
  for (const auto& s : sol.samples) csv.row({s.t, s.w});
  emit(res, cfg, "riccati.csv", csv.str());
  res.reports.push_back(riccati_bound_report(sol));
  emit_report(res, cfg, "riccati_report.json");
  return res;
}

CommandResult contraction_command(const ScenarioConfig& cfg) {
  double E0 = cfg.e0;
  if (!(E0 > 0.0)) E0 = make_ic(cfg.p0, cfg.q0).E0();
  const double delta0 = cfg.delta0 > 0.0 ? cfg.delta0 : default_delta0(E0);
  const auto seq = contraction_sequence(E0, delta0, cfg.n);
  nlohmann::json j;
  j["E0"] = seq.E0;
  j["delta0"] = seq.delta0;
  j["D"] = seq.D;
  j["contraction"] = seq.contraction;
  j["diverges"] = seq.diverges;
  j["below_epsilon"] = seq.below_epsilon;
  CommandResult res;
  emit(res, cfg, "contraction.json", dump_json(j));
  return res;
}

namespace {

grid::GridConfig grid_config(const ScenarioConfig& cfg, const AntisymmetricIC& ic) {
  grid::GridConfig g;
  g.L = cfg.L;
  g.N = cfg.N;
  g.eps = cfg.eps;
  g.cfl = cfg.cfl;
  g.t_end = cfg.t_end > 0.0 ? cfg.t_end : 0.5 * ic.T0();
  g.snapshot_times = cfg.snapshot_times;
  g.reconstruction = cfg.reconstruction;
  return g;
}

}  // namespace

CommandResult grid_command(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  const auto g = grid_config(cfg, sc.ic);
  const auto run = grid::run(sc.ic, g);
  CommandResult res;
  CsvWriter csv({"t", "x", "u"});
  for (const auto& s : run.snapshots)
    for (std::size_t i = 0; i < s.size(); ++i) csv.row({s.t, s.x(i), s.u[i]});
  emit(res, cfg, "grid_snapshot.csv", csv.str());
  const auto& last = run.snapshots.back();
  nlohmann::json j;
  j["eps"] = g.eps;
  j["N"] = g.N;
  j["L"] = g.L;
  j["cfl"] = g.cfl;
  j["t"] = last.t;
  j["linf_error"] = grid::linf_error(last, sc.field);
  j["energy"] = grid::discrete_energy(last);
  j["max_abs_u"] = grid::max_abs(last);
  j["steps"] = run.steps;
  j["max_energy_increase"] = run.max_energy_increase;
  j["tail_estimate"] = run.tail_estimate;
  j["experimental"] = run.experimental;
  emit(res, cfg, "grid_summary.json", dump_json(j));
  res.reports.push_back(VerificationReport::make("grid_energy", std::max(0.0, run.max_energy_increase), 0.0,
                                                 run.energy.size(), "largest per-step increase of the discrete energy"));
  emit_report(res, cfg, "grid_report.json");
  return res;
}

CommandResult sweep_command(const ScenarioConfig& cfg) {
  const auto sc = scenario(cfg);
  struct Job {
    double eps;
    std::size_t N;
    nlohmann::json out;
    std::string error;
  };
  std::vector<Job> jobs;
  for (double eps : cfg.sweep_eps)
    for (std::size_t N : cfg.sweep_N) jobs.push_back({eps, N, {}, {}});
  if (jobs.empty()) throw UsageError("sweep: empty eps or N list");

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      Job& job = jobs[k];
      try {
        ScenarioConfig c = cfg;
        c.eps = job.eps;
        c.N = job.N;
        const auto g = grid_config(c, sc.ic);
        const auto run = grid::run(sc.ic, g);
        const auto& last = run.snapshots.back();
        job.out = {{"eps", job.eps},
                   {"N", job.N},
                   {"t", last.t},
                   {"linf_error", grid::linf_error(last, sc.field)},
                   {"energy", grid::discrete_energy(last)}};
      } catch (const std::exception& e) {
        job.error = e.what();
      }
    }
  };
  const std::size_t nthreads = std::min(cfg.jobs, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  nlohmann::json arr = nlohmann::json::array();
  for (const auto& job : jobs) {
    if (!job.error.empty())
      throw std::runtime_error(fmt::format("sweep instance eps={} N={} failed: {}", format17(job.eps), job.N, job.error));
    arr.push_back(job.out);
  }
  CommandResult res;
  emit(res, cfg, "sweep.json", dump_json(arr));
  return res;
}

CommandResult plot_command(const ScenarioConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("plot: --input is required");
  CsvTable table;
  try {
    table = read_csv(cfg.input);
  } catch (const std::exception& e) {
    throw UsageError(std::string("plot: ") + e.what());
  }
  if (table.rows.empty()) throw UsageError("plot: empty series in " + cfg.input);
  std::vector<std::string> columns;
  std::string_view rest = cfg.columns;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    if (!item.empty()) columns.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  const PlotKind kind = cfg.kind == "profile" ? PlotKind::profile : PlotKind::series;
  std::string svg;
  try {
    svg = render_svg(table, kind, columns, fs::path(cfg.input).filename().string());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("plot: ") + e.what());
  }
  CommandResult res;
  const std::string name = cfg.output.empty() ? fs::path(cfg.input).stem().string() + ".svg" : cfg.output;
  const fs::path target = fs::path(name).is_absolute() ? fs::path(name) : resolve_output_dir(cfg) / name;
  atomic_write(target, svg);
  res.files.push_back(target);
  return res;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Peakon-antipeakon laboratory for the Camassa-Holm equation"};
  app.name("peakon-lab");
  app.require_subcommand(1, 1);
  std::string global_config;
  app.add_option("--config", global_config, "flat key = value configuration file");

  struct Flag {
    std::string key;
    std::string value;
    CLI::Option* opt = nullptr;
    const CLI::App* owner = nullptr;
  };
  std::vector<std::unique_ptr<Flag>> flags;
  std::map<const CLI::App*, std::string> sub_config;
  std::map<const CLI::App*, std::function<CommandResult(const ScenarioConfig&)>> handlers;

  auto help_for = [](std::string_view key) {
    for (const auto& k : config_keys())
      if (k.key == key) return std::string(k.help);
    return std::string();
  };
  auto add = [&](const std::string& name, const std::string& desc, std::vector<std::string> keys,
                 std::function<CommandResult(const ScenarioConfig&)> fn) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", sub_config[sub], "flat key = value configuration file");
    keys.push_back("output_dir");
    for (const auto& key : keys) {
      auto f = std::make_unique<Flag>();
      f->key = key;
      f->owner = sub;
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      f->opt = sub->add_option("--" + flag, f->value, help_for(key));
      flags.push_back(std::move(f));
    }
    handlers[sub] = std::move(fn);
  };
  const std::vector<std::string> ic_keys = {"p0", "q0"};
  auto with = [&](std::vector<std::string> extra) {
    extra.insert(extra.begin(), ic_keys.begin(), ic_keys.end());
    return extra;
  };
  add("closed-form", "tabulate p(t), q(t) and the invariant defect",
      with({"samples", "profile_times", "x_min", "x_max", "x_samples"}), closed_form_command);
  add("ode", "integrate the (p, q) system and compare with the closed form", with({"tol", "t_end"}), ode_command);
  add("chars", "trace characteristics and pair diagnostics",
      with({"delta0", "tol", "t_end", "t_samples", "xi", "checks"}), chars_command);
  add("verify", "run the verification suite on the dissipative closed-form field",
      with({"delta0", "tol", "x_min", "x_max", "x_samples", "t_samples", "checks", "seed"}), verify_command);
  add("riccati", "solve the Riccati comparison problem", with({"kg", "k0", "delta0", "source", "seed", "tol"}),
      riccati_command);
  add("contraction", "iterate the contraction sequence", with({"e0", "delta0", "n"}), contraction_command);
  add("grid", "run the vanishing-viscosity grid solver",
      with({"L", "N", "eps", "cfl", "t_end", "snapshot_times", "reconstruction"}), grid_command);
  add("sweep", "grid runs over eps x N, concurrently",
      with({"L", "cfl", "t_end", "sweep_eps", "sweep_N", "jobs", "reconstruction"}), sweep_command);
  add("plot", "render a CSV series as a static SVG", {"input", "kind", "columns", "output"}, plot_command);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "peakon-lab: " << e.what() << "\n";
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  ScenarioConfig cfg;
  try {
    if (!global_config.empty()) load_config_file(global_config, cfg);
    if (!sub_config[sub].empty()) load_config_file(sub_config[sub], cfg);
    for (const auto& f : flags)
      if (f->owner == sub && f->opt->count() > 0) cfg.set(f->key, f->value);
    if (cfg.x_max <= cfg.x_min) throw ConfigError("x_max must exceed x_min");
  } catch (const ConfigError& e) {
    err << "peakon-lab: config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const CommandResult res = handlers[sub](cfg);
    for (const auto& f : res.files) out << "wrote " << f.string() << "\n";
    std::vector<std::string> failing;
    for (const auto& r : res.reports) {
      out << (r.passed ? "PASS " : "FAIL ") << r.check_name << ": residual " << format17(r.max_residual)
          << " (tol " << format17(r.tolerance) << ")\n";
      if (!r.passed) failing.push_back(r.check_name);
    }
    if (!failing.empty()) {
      err << "peakon-lab: failed checks:";
      for (const auto& n : failing) err << " " << n;
      err << "\n";
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    err << "peakon-lab: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "peakon-lab: " << sub->get_name() << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace peakon::lab
