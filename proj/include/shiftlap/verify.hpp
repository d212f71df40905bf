#pragma once

// Randomized self-consistency suite behind the `verify` command.

#include <cstdint>
#include <string>
#include <vector>

#include "shiftlap/scalar.hpp"

namespace shiftlap {

struct VerifyConfig {
  int n = 2;
  int m_max = 4;
  std::uint64_t seed = 0;
  Arith arith = Arith::exact;
  /// Random instances per check and level.
  int samples = 6;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  long cases = 0;
  /// First failing case, empty on success.
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

VerifyReport run_verification(const VerifyConfig& config);

}  // namespace shiftlap
