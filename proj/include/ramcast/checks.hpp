#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ramcast::checks {

inline constexpr int kCriterionCount = 8;

struct CheckOptions {
  std::filesystem::path out_dir = "ramcast-check";
  unsigned jobs = 0;
  // Reduced sizes for smoke testing: coarser grids, shorter runs, no K = 50.
  bool quick = false;
  std::uint64_t seed = 42;
};

struct SubCheck {
  std::string name;
  bool passed = true;
  std::string detail;
  // Informational lines are reported but do not decide the criterion.
  bool informational = false;
};

struct CheckResult {
  int criterion = 0;
  std::string title;
  std::vector<SubCheck> parts;
  std::vector<std::filesystem::path> outputs;  // CSV files written
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; 0 = none

  bool passed() const;
};

/// Runs one acceptance criterion (1..kCriterionCount). Outputs go to
/// options.out_dir / "criterion<N>".
CheckResult run_criterion(int criterion, const CheckOptions& options);

// "PASS criterion 3: <title> (12.3 s)" followed by one indented line per part.
std::string format_result(const CheckResult& result);

}  // namespace ramcast::checks
