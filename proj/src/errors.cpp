#include "sphsub/errors.hpp"

namespace sphsub {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::AntipodalPoints: return "AntipodalPoints";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PointsOutsideBall: return "PointsOutsideBall";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularHessian: return "SingularHessian";
    case ErrorKind::LeftCertifiedBall: return "LeftCertifiedBall";
    case ErrorKind::UnknownScheme: return "UnknownScheme";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::GateViolation: return "GateViolation";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::AssumptionViolated: return "AssumptionViolated";
    case ErrorKind::CompositionFailure: return "CompositionFailure";
    case ErrorKind::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace sphsub
