#include "regemb/error.hpp"

namespace regemb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyConfiguration: return "EmptyConfiguration";
    case ErrorKind::NotRational: return "NotRational";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::DistinctnessViolation: return "DistinctnessViolation";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::NotATangency: return "NotATangency";
    case ErrorKind::DegenerateCurvature: return "DegenerateCurvature";
    case ErrorKind::ProjectionSingularity: return "ProjectionSingularity";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::ReductionFailed: return "ReductionFailed";
  }
  return "Unknown";
}

}  // namespace regemb
