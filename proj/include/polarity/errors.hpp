#pragma once

#include <stdexcept>
#include <string>

namespace polarity {

enum class ErrorCode {
  InvalidArgument = 1,
  ConfigInvalid,
  DimensionMismatch,
  BodyNotContainingOrigin,
  UnboundedBody,
  NonSymmetricHPolytope,
  NonSymmetricBody,
  SampleBudgetTooSmall,
  DegenerateGenerators,
  NoConvergence,
  ExponentOutOfRange,
  ZeroWeight,
  NotLocallyIntegrable,
  NonIntegrableSingularity,
  ZeroMeasureCube,
  EmptySampling,
  CaseMismatch,
  QuadratureNotConverged,
  GridDomainTooSmall,
  ZeroDenominator,
  DegenerateInput,
  ManifestMismatch,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace polarity
