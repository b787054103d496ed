#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stoparea::verify {

// One acceptance criterion: frozen id (A1..A11), outcome, and a short
// measured-vs-required summary.
struct CheckResult {
  std::string id;
  bool passed = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20260824;
  // 0 runs the full fixed-grid suite; a specific alpha runs the subset of
  // criteria that are parametric in alpha, evaluated at that alpha only.
  double alpha = 0.0;
};

std::vector<CheckResult> run_acceptance(const Options& opt);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace stoparea::verify
