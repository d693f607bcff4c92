#pragma once

#include "mipp/config.hpp"

#include <string>
#include <vector>

namespace mipp {

/// One named invariant. A check passes when measured <= threshold; a check
/// that throws is reported with a NaN measurement and fails.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Every invariant of the library, evaluated for the risk model, grid and
/// Monte Carlo settings in config. Output depends only on config.
std::vector<CheckResult> run_validation(const RunConfig& config);

/// `check,measured,threshold,status`
std::string validation_csv(const std::vector<CheckResult>& results);

}  // namespace mipp
