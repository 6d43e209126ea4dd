#include <cmath>
#include <limits>

#include "doctest.h"
#include "peakon/report.hpp"

using namespace peakon;

TEST_CASE("pass is residual <= tolerance, NaN fails") {
  CHECK(VerificationReport::make("a", 1.0, 1.0, 3).passed);
  CHECK_FALSE(VerificationReport::make("a", 1.0 + 1e-16 * 4, 1.0, 3).passed);
  CHECK_FALSE(VerificationReport::make("a", std::nan(""), 1.0, 3).passed);
  CHECK_FALSE(VerificationReport::make("a", std::numeric_limits<double>::infinity(), 1.0, 3).passed);
}

TEST_CASE("JSON schema and round trip") {
  const auto r = VerificationReport::make("energy", 2.5e-7, 1e-6, 81, "ok");
  const auto j = to_json(r);
  for (const char* key : {"check_name", "passed", "max_residual", "tolerance", "samples", "details"})
    CHECK(j.contains(key));
  CHECK(j.size() == 6);
  const auto back = report_from_json(j);
  CHECK(back.check_name == "energy");
  CHECK(back.passed);
  CHECK(back.max_residual == r.max_residual);
  CHECK(back.tolerance == r.tolerance);
  CHECK(back.samples == 81);
  CHECK(back.details == "ok");
}

TEST_CASE("non-finite residual serializes as null") {
  const auto r = VerificationReport::make("x", std::numeric_limits<double>::infinity(), 0.0, 0);
  const auto j = to_json(r);
  CHECK(j["max_residual"].is_null());
  CHECK(std::isnan(report_from_json(j).max_residual));
}

TEST_CASE("suite is sorted and passes only if all pass") {
  std::vector<VerificationReport> reps = {VerificationReport::make("zeta", 0.0, 1.0, 1),
                                          VerificationReport::make("alpha", 2.0, 1.0, 1)};
  const auto j = suite_to_json(reps);
  CHECK_FALSE(j["passed"].get<bool>());
  CHECK(j["reports"][0]["check_name"] == "alpha");
  CHECK_FALSE(all_passed(reps));
  reps.pop_back();
  CHECK(all_passed(reps));
  CHECK(all_passed({}));
}
