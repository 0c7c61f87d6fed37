#pragma once

#include <stdexcept>
#include <string>

namespace mirroramp {

enum class ErrorCode {
  None = 0,
  InvalidArgument,
  ConfigError,
  NonUniqueSteadyState,
  SolverFailure,
  StepUnderflow,
  DegenerateDetuning,
  HarmonicTruncationNotConverged,
  DegenerateResolvent,
  NoPeak,
  NoCrossing,
  DegenerateCircle,
  PoorFit,
  NoMinimum,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace mirroramp
