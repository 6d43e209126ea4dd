#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "peakon/report.hpp"

namespace peakon::lab {

struct CommandResult {
  std::vector<VerificationReport> reports;
  std::vector<std::filesystem::path> files;
};

CommandResult closed_form_command(const ScenarioConfig& cfg);
CommandResult ode_command(const ScenarioConfig& cfg);
CommandResult chars_command(const ScenarioConfig& cfg);
CommandResult verify_command(const ScenarioConfig& cfg);
CommandResult riccati_command(const ScenarioConfig& cfg);
CommandResult contraction_command(const ScenarioConfig& cfg);
CommandResult grid_command(const ScenarioConfig& cfg);
CommandResult sweep_command(const ScenarioConfig& cfg);
CommandResult plot_command(const ScenarioConfig& cfg);

/// The enabled checks of the verification suite on the dissipative
/// closed-form field for cfg's initial data.
[[nodiscard]] std::vector<VerificationReport> verification_suite(const ScenarioConfig& cfg);

/// Bounded source t -> Kg * sum a_j sin(w_j t + phi_j) / sum |a_j| drawn from
/// `seed`.
[[nodiscard]] std::function<double(double)> random_source(std::uint64_t seed, double Kg);

/// Entry point shared by the executable and the tests. Exit status 0 when
/// every check passes, 1 on a failed check or runtime error, 2 on a usage
/// or configuration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace peakon::lab
