#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyiter {

enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  ParseError,
  CombinatorialOverflow,
  SingularSystem,
  MultichainDetected,
  NonNegativeViolation,
  Inconclusive,
  RadiusNotDominated,
  NoRenewalState,
  NonPositivePhi,
  PhiCertificateViolated,
  NotContracting,
  BoundExceeded,
  DomainError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures are reported through this exception; `code()` carries
/// the error taxonomy so callers (the CLI in particular) can map it to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polyiter
