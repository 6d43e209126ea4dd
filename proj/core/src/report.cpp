#include "peakon/report.hpp"

#include <algorithm>
#include <cmath>

namespace peakon {

VerificationReport VerificationReport::make(std::string name, double max_residual, double tolerance,
                                            std::size_t samples, std::string details) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.max_residual = max_residual;
  r.tolerance = tolerance;
  // NaN residuals fail.
  r.passed = max_residual <= tolerance;
  r.samples = samples;
  r.details = std::move(details);
  return r;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["check_name"] = r.check_name;
  j["passed"] = r.passed;
  j["max_residual"] = std::isfinite(r.max_residual) ? nlohmann::json(r.max_residual) : nlohmann::json(nullptr);
  j["tolerance"] = r.tolerance;
  j["samples"] = r.samples;
  j["details"] = r.details;
  return j;
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.check_name = j.at("check_name").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.max_residual = j.at("max_residual").is_null() ? std::nan("") : j.at("max_residual").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.samples = j.at("samples").get<std::size_t>();
  r.details = j.at("details").get<std::string>();
  return r;
}

nlohmann::json suite_to_json(std::span<const VerificationReport> reports) {
  std::vector<VerificationReport> sorted(reports.begin(), reports.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.check_name < b.check_name; });
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : sorted) arr.push_back(to_json(r));
  return {{"passed", all_passed(reports)}, {"reports", arr}};
}

bool all_passed(std::span<const VerificationReport> reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

}  // namespace peakon
