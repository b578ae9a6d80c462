#include "polyiter/error.hpp"

namespace polyiter {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::CombinatorialOverflow: return "CombinatorialOverflow";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::MultichainDetected: return "MultichainDetected";
    case ErrorCode::NonNegativeViolation: return "NonNegativeViolation";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::RadiusNotDominated: return "RadiusNotDominated";
    case ErrorCode::NoRenewalState: return "NoRenewalState";
    case ErrorCode::NonPositivePhi: return "NonPositivePhi";
    case ErrorCode::PhiCertificateViolated: return "PhiCertificateViolated";
    case ErrorCode::NotContracting: return "NotContracting";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::DomainError: return "DomainError";
  }
  return "Unknown";
}

}  // namespace polyiter
