#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pi_forge {

enum class ErrorCode {
  InvalidAssignment,
  InvalidQuery,
  ZeroEvidence,
  InvalidSpec,
  NotFound,
  NonRealizable,
  InvalidArgument,
  InvalidInput,
  InvalidCell,
  Domain,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Callers that need to distinguish failure kinds
/// switch on code(); the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pi_forge
