#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regemb {

enum class ErrorKind {
  InvalidInput,
  InvalidParameter,
  DegenerateDirection,
  DimensionMismatch,
  EmptyConfiguration,
  NotRational,
  OutOfDomain,
  DistinctnessViolation,
  ZeroFunction,
  NotATangency,
  DegenerateCurvature,
  ProjectionSingularity,
  StepRejected,
  ReductionFailed,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this exception; `kind()` is the
// stable machine-readable part, `what()` carries the diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace regemb
