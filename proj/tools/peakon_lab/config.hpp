#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "peakon/grid_solver.hpp"

namespace peakon::lab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key = value scenario description. Every key has a documented range;
/// `set` parses and validates a single entry.
struct ScenarioConfig {
  double p0 = 1.0;
  double q0 = 1.0;
  double delta0 = 0.0;  // 0: min(0.1, 0.1 / sqrt(E0))
  std::size_t samples = 200;
  double tol = 1e-10;
  double t_end = 0.0;  // 0: subcommand default
  double x_min = -6.0;
  double x_max = 6.0;
  std::size_t x_samples = 241;
  std::size_t t_samples = 61;

  double L = 20.0;
  std::size_t N = 4001;
  double eps = 1e-3;
  double cfl = 0.5;
  grid::Reconstruction reconstruction = grid::Reconstruction::first_order;
  std::vector<double> snapshot_times;

  std::vector<std::string> checks;  // empty: all
  std::string output_dir;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::vector<double> sweep_eps{1e-2, 1e-3};
  std::vector<std::size_t> sweep_N{2001, 4001};
  std::vector<double> xi;
  std::vector<double> profile_times;

  double kg = 0.5;
  double k0 = 1.0;
  std::string source = "random";
  double e0 = 0.0;  // 0: E0 of the initial data
  std::size_t n = 6;

  std::string input;
  std::string kind = "series";
  std::string columns;
  std::string output;

  /// Throws ConfigError naming the key on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  [[nodiscard]] bool check_enabled(std::string_view name) const;
};

/// Keys accepted by ScenarioConfig::set, with a one-line description each.
struct KeyInfo {
  std::string_view key;
  std::string_view help;
};
[[nodiscard]] const std::vector<KeyInfo>& config_keys();

[[nodiscard]] const std::vector<std::string>& known_checks();

/// Reads `# comment` / `key = value` lines. Errors carry file:line.
void load_config_file(const std::filesystem::path& path, ScenarioConfig& cfg);
void load_config_text(std::string_view text, std::string_view origin, ScenarioConfig& cfg);

/// --output-dir flag or config value, then $PEAKON_LAB_OUTPUT, then ".".
[[nodiscard]] std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg);

}  // namespace peakon::lab
