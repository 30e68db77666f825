#include "polarity/errors.hpp"

namespace polarity {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BodyNotContainingOrigin: return "BodyNotContainingOrigin";
    case ErrorCode::UnboundedBody: return "UnboundedBody";
    case ErrorCode::NonSymmetricHPolytope: return "NonSymmetricHPolytope";
    case ErrorCode::NonSymmetricBody: return "NonSymmetricBody";
    case ErrorCode::SampleBudgetTooSmall: return "SampleBudgetTooSmall";
    case ErrorCode::DegenerateGenerators: return "DegenerateGenerators";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::NotLocallyIntegrable: return "NotLocallyIntegrable";
    case ErrorCode::NonIntegrableSingularity: return "NonIntegrableSingularity";
    case ErrorCode::ZeroMeasureCube: return "ZeroMeasureCube";
    case ErrorCode::EmptySampling: return "EmptySampling";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::GridDomainTooSmall: return "GridDomainTooSmall";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ManifestMismatch: return "ManifestMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace polarity
