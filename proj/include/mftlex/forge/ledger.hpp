#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mftlex::forge {

enum class LedgerStage {
  Expand,
  Exclude,
  Translate,
  FrequencyFilter,
  Merge,
  BackTranslate,
  BackTranslateFail,
  CategoryConflict,
  CategoryAssign,
};

std::string_view to_string(LedgerStage stage);
std::optional<LedgerStage> parse_ledger_stage(std::string_view text);

// One decision. Items are pattern notations ("safe*", "安全"). Within a
// stage the working set changes only through records: `removed` items leave
// it and `output` items join it. `input` names what the decision looked at.
// Each stage opens with a record whose `input` is its whole working set and
// closes with one whose `output` is the resulting set.
struct LedgerRecord {
  LedgerStage stage;
  std::vector<std::string> input;
  std::vector<std::string> output;
  std::vector<std::string> removed;
  std::string reason;
  bool needsHumanReview = false;

  friend bool operator==(const LedgerRecord&, const LedgerRecord&) = default;
};

inline constexpr std::string_view kStageInputReason = "stage input";
inline constexpr std::string_view kStageOutputReason = "stage output";

bool is_summary(const LedgerRecord& record);

// One JSON object per line with keys in fixed order:
// stage, input, output, removed, reason, needsHumanReview.
std::string to_json_line(const LedgerRecord& record);
LedgerRecord parse_json_line(std::string_view line);

std::string to_jsonl(const std::vector<LedgerRecord>& records);
std::vector<LedgerRecord> parse_jsonl(std::string_view text);

}  // namespace mftlex::forge
