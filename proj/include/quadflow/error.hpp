#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace quadflow {

enum class ErrorCode {
  InvalidInput,
  DeterminantZero,
  ConstraintViolated,
  NonGeneric,
  DegenerateZ,
  ZMismatch,
  InvalidLambda,
  PoleAtTime,
  Overflow,
  StepLimitExceeded,
  BlowupDetected,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<double> time = std::nullopt)
      : std::runtime_error(what), code_(code), time_(time) {}

  ErrorCode code() const { return code_; }
  // Set for PoleAtTime, BlowupDetected and StepLimitExceeded.
  std::optional<double> time() const { return time_; }

 private:
  ErrorCode code_;
  std::optional<double> time_;
};

}  // namespace quadflow
