#include "wcalc/errors.hpp"

namespace wcalc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::WeightSumOutOfRange: return "WeightSumOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CoincidentAtoms: return "CoincidentAtoms";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::MissingVelocities: return "MissingVelocities";
    case ErrorCode::JacobianUnavailable: return "JacobianUnavailable";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::NotClosedCurve: return "NotClosedCurve";
    case ErrorCode::NotClosedForm: return "NotClosedForm";
    case ErrorCode::AtomCollision: return "AtomCollision";
    case ErrorCode::StepRejected: return "StepRejected";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonpositiveWeight:
    case ErrorCode::LengthMismatch:
    case ErrorCode::WeightSumOutOfRange:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::OutOfRange:
    case ErrorCode::NonMonotone:
    case ErrorCode::MissingVelocities:
    case ErrorCode::JacobianUnavailable:
    case ErrorCode::BadRadius:
    case ErrorCode::OddDimension:
    case ErrorCode::InvalidArgument:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

void fail_at(ErrorCode code, const std::string& message, double t) {
  Error e(code, std::string(error_code_name(code)) + ": " + message);
  throw e.at_time(t);
}

}  // namespace wcalc
