#include "mftlex/error.hpp"

namespace mftlex {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::UnknownCategoryId: return "UnknownCategoryId";
    case ErrorCode::EmptyPattern: return "EmptyPattern";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::DuplicatePatternConflict: return "DuplicatePatternConflict";
    case ErrorCode::InvalidUtf8: return "InvalidUtf8";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::MissingParticipant: return "MissingParticipant";
    case ErrorCode::ZeroDictSize: return "ZeroDictSize";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::InvalidDf: return "InvalidDf";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ProviderFailure: return "ProviderFailure";
    case ErrorCode::UnknownDecisionTarget: return "UnknownDecisionTarget";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

namespace {
std::string with_line(const std::string& message, std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}
}  // namespace

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> line)
    : std::runtime_error(with_line(message, line)),
      code_(code),
      line_(line),
      detail_(std::move(message)) {}

}  // namespace mftlex
