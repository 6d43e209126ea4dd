#pragma once

#include <string>

namespace acceptance {

struct DeterminismResult {
  bool identical = false;
  std::string detail;
};

DeterminismResult check_determinism();

}  // namespace acceptance
