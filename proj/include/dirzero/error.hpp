#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dirzero {

enum class ErrorCode {
  UnsupportedIndex,
  PoleHit,
  LogSingular,
  InvalidSequence,
  SupportMismatch,
  BoundViolation,
  GammaOutOfRange,
  GammaTooLarge,
  GridMismatch,
  DivisorTooSmall,
  SupportViolation,
  NoContraction,
  NontrivialityFailed,
  IndexOverflow,
  BoundaryTooClose,
  FarFieldViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failed contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dirzero
