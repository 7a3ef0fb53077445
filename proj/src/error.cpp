#include "presgauge/error.hpp"

namespace presgauge {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoElements: return "NoElements";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidLabelSet: return "InvalidLabelSet";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::Overconstrained: return "Overconstrained";
    case ErrorCode::UnknownElementId: return "UnknownElementId";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::ScorerFailure: return "ScorerFailure";
    case ErrorCode::RefinerFailure: return "RefinerFailure";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::MalformedRemoteResponse: return "MalformedRemoteResponse";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace presgauge
