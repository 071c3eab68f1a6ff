#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace conjtime {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20261016;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs the eleven acceptance criteria in order. `on_result` is invoked as
/// each one finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const CriterionCallback& on_result = {});

/// "PASS [3] LQ closed forms: ..." style line.
std::string format_criterion(const CriterionResult& r);

}  // namespace conjtime
