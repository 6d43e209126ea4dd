#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace peakon {

/// Outcome of one check. `passed` is always `max_residual <= tolerance`.
struct VerificationReport {
  std::string check_name;
  bool passed = false;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string details;

  static VerificationReport make(std::string name, double max_residual, double tolerance,
                                 std::size_t samples, std::string details = {});
};

[[nodiscard]] nlohmann::json to_json(const VerificationReport& r);
[[nodiscard]] VerificationReport report_from_json(const nlohmann::json& j);

/// {"passed": bool, "reports": [...]}; reports are sorted by name so the
/// document does not depend on execution order.
[[nodiscard]] nlohmann::json suite_to_json(std::span<const VerificationReport> reports);

[[nodiscard]] bool all_passed(std::span<const VerificationReport> reports);

}  // namespace peakon
