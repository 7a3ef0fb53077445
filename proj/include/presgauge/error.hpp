#pragma once

#include <stdexcept>
#include <string>

namespace presgauge {

enum class ErrorCode {
  NoElements,
  EmptyInput,
  LengthMismatch,
  InvalidLabelSet,
  GroupTooSmall,
  InvalidArgument,
  DecodeError,
  SchemaViolation,
  EmptyDataset,
  NotApplicable,
  Overconstrained,
  UnknownElementId,
  EmptyGrid,
  ScorerFailure,
  RefinerFailure,
  Transport,
  MalformedRemoteResponse,
  ScoreOutOfRange,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace presgauge
