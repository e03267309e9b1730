#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fint::acceptance {

inline constexpr int kCriterionCount = 14;

struct Options {
  std::uint64_t seed = 42;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic for a given seed (no timings)
  double seconds = 0.0;
};

/// Runs one acceptance criterion (1..14). Library exceptions raised inside a
/// criterion are reported as a failure with the message in detail.
CriterionResult run_criterion(int id, const Options& opt = {});

std::vector<CriterionResult> run_all(const Options& opt = {});

}  // namespace fint::acceptance
