#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mftlex {

enum class ErrorCode {
  // dictionary files
  MalformedHeader,
  MalformedEntry,
  UnknownCategoryId,
  EmptyPattern,
  InvalidPattern,
  DuplicatePatternConflict,
  InvalidUtf8,
  // scoring
  MissingContext,
  MissingParticipant,
  ZeroDictSize,
  // stats
  TooFewGroups,
  EmptyGroup,
  DegenerateInput,
  LengthMismatch,
  TooFewPoints,
  ZeroVariance,
  InvalidDf,
  InvalidArgument,
  // pipeline
  ProviderFailure,
  UnknownDecisionTarget,
  // files and configuration
  MalformedRecord,
  Io,
  Config,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports is an Error. Parse errors carry the
// 1-based line (or record) number they were found on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  // Message without the "line N: " prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string detail_;
};

// Non-fatal findings (duplicate unions, unmatched exclusions, ...).
struct Diagnostic {
  std::optional<std::size_t> line;
  std::string message;
};

}  // namespace mftlex
