#include "mirroramp/errors.hpp"

namespace mirroramp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::None: return "None";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::NonUniqueSteadyState: return "NonUniqueSteadyState";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::DegenerateDetuning: return "DegenerateDetuning";
    case ErrorCode::HarmonicTruncationNotConverged: return "HarmonicTruncationNotConverged";
    case ErrorCode::DegenerateResolvent: return "DegenerateResolvent";
    case ErrorCode::NoPeak: return "NoPeak";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::DegenerateCircle: return "DegenerateCircle";
    case ErrorCode::PoorFit: return "PoorFit";
    case ErrorCode::NoMinimum: return "NoMinimum";
  }
  return "Unknown";
}

}  // namespace mirroramp
