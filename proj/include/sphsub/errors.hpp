#pragma once

#include <stdexcept>
#include <string>

namespace sphsub {

enum class ErrorKind {
  ContractViolation,
  AntipodalPoints,
  DomainError,
  PointsOutsideBall,
  NoConvergence,
  SingularHessian,
  LeftCertifiedBall,
  UnknownScheme,
  LengthMismatch,
  GateViolation,
  DegenerateDenominator,
  AssumptionViolated,
  CompositionFailure,
  DimensionUnsupported,
  ParseError,
  IoError,
};

const char* to_string(ErrorKind kind);

// Every library failure is reported through this type; `kind()` lets callers
// branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sphsub
