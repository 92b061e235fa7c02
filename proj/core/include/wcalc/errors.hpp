#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace wcalc {

enum class ErrorCode {
  NonpositiveWeight,
  LengthMismatch,
  WeightSumOutOfRange,
  DimensionMismatch,
  CoincidentAtoms,
  OutOfRange,
  NonMonotone,
  MissingVelocities,
  JacobianUnavailable,
  BadRadius,
  NotClosedCurve,
  NotClosedForm,
  AtomCollision,
  StepRejected,
  OddDimension,
  SolverFailure,
  InvalidArgument,
  IoError,
};

const char* error_code_name(ErrorCode code);

// Validation errors are contract violations detectable from the inputs alone;
// the rest surface mid-computation (collisions, failed certificates).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // Failure time for AtomCollision / StepRejected; NaN otherwise.
  double when() const { return when_; }
  Error& at_time(double t) {
    when_ = t;
    return *this;
  }

 private:
  ErrorCode code_;
  double when_ = std::numeric_limits<double>::quiet_NaN();
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);
[[noreturn]] void fail_at(ErrorCode code, const std::string& message, double t);

}  // namespace wcalc
