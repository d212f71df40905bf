#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftlap {

enum class ErrorCode {
  level_too_small,
  level_mismatch,
  level_order,
  resource_limit,
  alphabet_mismatch,
  mode_mismatch,
  domain,
  same_point,
  boundary_mismatch,
  arity,
  incompatible,
  not_integrable,
  spec,
  usage,
};

/// Stable name of an error code, as printed by the CLI ("LevelTooSmall", ...).
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shiftlap
