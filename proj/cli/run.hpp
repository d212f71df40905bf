#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shiftlap::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kIncompatible = 3,
  kDomain = 4,
};

/// Runs one command. `args` excludes the program name. Records go to `out`
/// (JSON lines or CSV), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shiftlap::cli
