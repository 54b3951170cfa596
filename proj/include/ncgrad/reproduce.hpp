#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncgrad/serialize.hpp"

namespace ncgrad {

struct Criterion {
  int id = 0;
  std::string title;
  double budget_seconds = 0.0;   // 0: no runtime limit
};

/// The acceptance suite: one entry per reproduced claim.
[[nodiscard]] const std::vector<Criterion>& criteria();

struct ReproduceOptions {
  std::uint64_t seed = 7;
  int threads = 0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;   // one line per sub-check
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Runs one criterion. Exceptions from the checks are caught and reported
/// as failures; a criterion with a budget also fails when it overruns it.
[[nodiscard]] CriterionResult run_criterion(int id, const ReproduceOptions& options);

[[nodiscard]] Json to_json(const CriterionResult& result);
/// "[PASS] 3  title  (12.3 s / 120 s)"
[[nodiscard]] std::string summary_line(const CriterionResult& result);

}  // namespace ncgrad
