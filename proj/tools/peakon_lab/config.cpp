#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace peakon::lab {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + ": " + std::string(why));
}

double parse_double(std::string_view key, std::string_view v) {
  const std::string s(trim(v));
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) bad(key, v, "expected a finite number");
  return d;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  const std::string_view s = trim(v);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) bad(key, v, "expected a non-negative integer");
  return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_doubles(std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(parse_double(key, item));
  return out;
}

void require(bool ok, std::string_view key, std::string_view value, std::string_view why) {
  if (!ok) bad(key, value, why);
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)>;

struct Entry {
  std::string_view help;
  Setter set;
};

Setter positive(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
    const double d = parse_double(k, v);
    require(d > 0.0, k, v, "must be > 0");
    c.*field = d;
  };
}

Setter non_negative(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view k, std::string_view v) {
    const double d = parse_double(k, v);
    require(d >= 0.0, k, v, "must be >= 0");
    c.*field = d;
  };
}

Setter any_real(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view k, std::string_view v) { c.*field = parse_double(k, v); };
}

Setter count(std::size_t ScenarioConfig::*field, std::size_t lo, std::size_t hi) {
  return [=](ScenarioConfig& c, std::string_view k, std::string_view v) {
    const auto n = parse_uint(k, v);
    require(n >= lo && n <= hi, k, v, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    c.*field = static_cast<std::size_t>(n);
  };
}

Setter text(std::string ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view, std::string_view v) { c.*field = std::string(trim(v)); };
}

Setter real_list(std::vector<double> ScenarioConfig::*field, bool non_negative_only) {
  return [=](ScenarioConfig& c, std::string_view k, std::string_view v) {
    auto xs = parse_doubles(k, v);
    if (non_negative_only)
      for (double x : xs) require(x >= 0.0, k, v, "entries must be >= 0");
    c.*field = std::move(xs);
  };
}

const std::map<std::string, Entry, std::less<>>& table() {
  static const std::map<std::string, Entry, std::less<>> t = {
      {"p0", {"initial momentum p0 > 0", positive(&ScenarioConfig::p0)}},
      {"q0", {"initial half separation q0 > 0", positive(&ScenarioConfig::q0)}},
      {"delta0", {"post-collision horizon; 0 selects min(0.1, 0.1/sqrt(E0))", non_negative(&ScenarioConfig::delta0)}},
      {"samples", {"rows of the closed-form table, 2..1e6", count(&ScenarioConfig::samples, 2, 1'000'000)}},
      {"tol", {"integrator tolerance, in (0, 1e-3]",
               [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                 const double d = parse_double(k, v);
                 require(d > 0.0 && d <= 1e-3, k, v, "must lie in (0, 1e-3]");
                 c.tol = d;
               }}},
      {"t_end", {"final time; 0 selects the subcommand default", non_negative(&ScenarioConfig::t_end)}},
      {"x_min", {"left end of the space grid", any_real(&ScenarioConfig::x_min)}},
      {"x_max", {"right end of the space grid", any_real(&ScenarioConfig::x_max)}},
      {"x_samples", {"space grid points, 2..1e5", count(&ScenarioConfig::x_samples, 2, 100'000)}},
      {"t_samples", {"time grid points, 3..1e5", count(&ScenarioConfig::t_samples, 3, 100'000)}},
      {"L", {"grid solver half width > 0", positive(&ScenarioConfig::L)}},
      {"N", {"grid solver node count, odd, 3..1e6",
             [](ScenarioConfig& c, std::string_view k, std::string_view v) {
               const auto n = parse_uint(k, v);
               require(n >= 3 && n <= 1'000'000 && n % 2 == 1, k, v, "must be odd and in [3, 1e6]");
               c.N = static_cast<std::size_t>(n);
             }}},
      {"eps", {"viscosity >= 0 (0 is experimental)", non_negative(&ScenarioConfig::eps)}},
      {"cfl", {"Courant factor in (0, 1)",
               [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                 const double d = parse_double(k, v);
                 require(d > 0.0 && d < 1.0, k, v, "must lie in (0, 1)");
                 c.cfl = d;
               }}},
      {"reconstruction", {"first_order | minmod",
                          [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                            const auto s = trim(v);
                            if (s == "first_order") c.reconstruction = grid::Reconstruction::first_order;
                            else if (s == "minmod") c.reconstruction = grid::Reconstruction::minmod;
                            else bad(k, v, "expected first_order or minmod");
                          }}},
      {"snapshot_times", {"comma list of extra grid snapshot times", real_list(&ScenarioConfig::snapshot_times, true)}},
      {"checks", {"comma list of enabled checks; empty enables all",
                  [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                    std::vector<std::string> out;
                    for (auto item : split_list(v)) {
                      const auto& known = known_checks();
                      if (std::find(known.begin(), known.end(), item) == known.end())
                        bad(k, item, "unknown check name");
                      out.emplace_back(item);
                    }
                    c.checks = std::move(out);
                  }}},
      {"output_dir", {"directory for all artifacts", text(&ScenarioConfig::output_dir)}},
      {"seed", {"seed for randomized check sources",
                [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.seed = parse_uint(k, v); }}},
      {"jobs", {"concurrent sweep instances, 1..256", count(&ScenarioConfig::jobs, 1, 256)}},
      {"sweep_eps", {"comma list of viscosities for sweep", real_list(&ScenarioConfig::sweep_eps, true)}},
      {"sweep_N", {"comma list of odd node counts for sweep",
                   [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                     std::vector<std::size_t> out;
                     for (auto item : split_list(v)) {
                       const auto n = parse_uint(k, item);
                       require(n >= 3 && n <= 1'000'000 && n % 2 == 1, k, item, "must be odd and in [3, 1e6]");
                       out.push_back(static_cast<std::size_t>(n));
                     }
                     c.sweep_N = std::move(out);
                   }}},
      {"xi", {"comma list of characteristic starting points", real_list(&ScenarioConfig::xi, false)}},
      {"profile_times", {"comma list of times for u(x) profile output", real_list(&ScenarioConfig::profile_times, true)}},
      {"kg", {"Riccati source bound Kg >= 0", non_negative(&ScenarioConfig::kg)}},
      {"k0", {"Riccati bound constant K0 > Kg", positive(&ScenarioConfig::k0)}},
      {"source", {"Riccati source: const | neg_const | random",
                  [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                    const auto s = trim(v);
                    require(s == "const" || s == "neg_const" || s == "random", k, v,
                            "expected const, neg_const or random");
                    c.source = std::string(s);
                  }}},
      {"e0", {"energy for contraction; 0 uses the initial data", non_negative(&ScenarioConfig::e0)}},
      {"n", {"contraction sequence length, 1..64", count(&ScenarioConfig::n, 1, 64)}},
      {"input", {"CSV series for plot", text(&ScenarioConfig::input)}},
      {"kind", {"plot kind: profile | series",
                [](ScenarioConfig& c, std::string_view k, std::string_view v) {
                  const auto s = trim(v);
                  require(s == "profile" || s == "series", k, v, "expected profile or series");
                  c.kind = std::string(s);
                }}},
      {"columns", {"comma list of CSV columns to plot (series kind)", text(&ScenarioConfig::columns)}},
      {"output", {"SVG output file name", text(&ScenarioConfig::output)}},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "alpha_evolution", "energy",         "identity_suite", "lagrangian_velocity", "merge_absorption",
      "oleinik",         "omega_inequality", "p_bounds",     "post_blowup_bound",   "riccati_bound",
      "slope_difference", "weak_form",     "weak_form_control"};
  return names;
}

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> out;
    for (const auto& [k, e] : table()) out.push_back({k, e.help});
    return out;
  }();
  return keys;
}

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  const std::string k = normalize(key);
  const auto it = table().find(k);
  if (it == table().end()) throw ConfigError("unknown key '" + k + "'");
  it->second.set(*this, k, value);
}

bool ScenarioConfig::check_enabled(std::string_view name) const {
  return checks.empty() || std::find(checks.begin(), checks.end(), name) != checks.end();
}

void load_config_text(std::string_view text, std::string_view origin, ScenarioConfig& cfg) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key");
    try {
      cfg.set(key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void load_config_file(const std::filesystem::path& path, ScenarioConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  load_config_text(ss.str(), path.string(), cfg);
}

std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv("PEAKON_LAB_OUTPUT"); env && *env) return env;
  return ".";
}

}  // namespace peakon::lab
