#include "mftlex/forge/ledger.hpp"

#include <array>
#include <json.hpp>

#include "mftlex/error.hpp"

namespace mftlex::forge {

namespace {

constexpr std::array<std::pair<LedgerStage, std::string_view>, 9> kStageNames{{
    {LedgerStage::Expand, "Expand"},
    {LedgerStage::Exclude, "Exclude"},
    {LedgerStage::Translate, "Translate"},
    {LedgerStage::FrequencyFilter, "FrequencyFilter"},
    {LedgerStage::Merge, "Merge"},
    {LedgerStage::BackTranslate, "BackTranslate"},
    {LedgerStage::BackTranslateFail, "BackTranslateFail"},
    {LedgerStage::CategoryConflict, "CategoryConflict"},
    {LedgerStage::CategoryAssign, "CategoryAssign"},
}};

using Json = nlohmann::ordered_json;

std::vector<std::string> string_list(const Json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw Error(ErrorCode::MalformedRecord, std::string("ledger record lacks array '") + field + "'");
  }
  return j[field].get<std::vector<std::string>>();
}

}  // namespace

std::string_view to_string(LedgerStage stage) {
  for (const auto& [s, text] : kStageNames) {
    if (s == stage) return text;
  }
  return "Unknown";
}

std::optional<LedgerStage> parse_ledger_stage(std::string_view text) {
  for (const auto& [s, name] : kStageNames) {
    if (name == text) return s;
  }
  return std::nullopt;
}

bool is_summary(const LedgerRecord& record) {
  return record.reason == kStageInputReason || record.reason == kStageOutputReason;
}

std::string to_json_line(const LedgerRecord& record) {
  Json j;
  j["stage"] = to_string(record.stage);
  j["input"] = record.input;
  j["output"] = record.output;
  j["removed"] = record.removed;
  j["reason"] = record.reason;
  j["needsHumanReview"] = record.needsHumanReview;
  return j.dump();
}

LedgerRecord parse_json_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("ledger line is not JSON: ") + e.what());
  }
  const auto stage = j.contains("stage") && j["stage"].is_string()
                         ? parse_ledger_stage(j["stage"].get<std::string>())
                         : std::nullopt;
  if (!stage) throw Error(ErrorCode::MalformedRecord, "ledger record has no valid 'stage'");
  if (!j.contains("reason") || !j["reason"].is_string() || !j.contains("needsHumanReview") ||
      !j["needsHumanReview"].is_boolean()) {
    throw Error(ErrorCode::MalformedRecord, "ledger record lacks 'reason' or 'needsHumanReview'");
  }
  return LedgerRecord{*stage,
                      string_list(j, "input"),
                      string_list(j, "output"),
                      string_list(j, "removed"),
                      j["reason"].get<std::string>(),
                      j["needsHumanReview"].get<bool>()};
}

std::string to_jsonl(const std::vector<LedgerRecord>& records) {
  std::string out;
  for (const LedgerRecord& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::vector<LedgerRecord> parse_jsonl(std::string_view text) {
  std::vector<LedgerRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    ++line_no;
    if (!line.empty()) {
      try {
        records.push_back(parse_json_line(line));
      } catch (const Error& e) {
        throw Error(e.code(), e.detail(), line_no);
      }
    }
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return records;
}

}  // namespace mftlex::forge
