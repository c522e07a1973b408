#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "mftlex/forge/ledger.hpp"
#include "mftlex/forge/providers.hpp"
#include "mftlex/forge/stages.hpp"
#include "mftlex/lexicon.hpp"

namespace mftlex::forge {

enum class Step { Expand = 1, Exclude, Translate, Filter, Merge, BackCheck, Resolve };

inline constexpr Step kFirstStep = Step::Expand;
inline constexpr Step kLastStep = Step::Resolve;

std::string_view name(Step step);  // "expand", "exclude", ... "resolve"
std::optional<Step> parse_step(std::string_view text);
int number(Step step);

// Only the inputs of the steps being run need to be set.
struct PipelineInputs {
  const Lexicon* source = nullptr;
  const WordListProvider* words = nullptr;
  const BilingualProvider* bilingual = nullptr;
  std::vector<FrequencyTable> tables;
  std::vector<std::string> exclusions;
  CategoryDecisions decisions;
  FilterLimits limits;
};

// With a work directory every step N writes stage<N>.dic (review view),
// stage<N>.state.jsonl (resume state) and stage<N>.ledger.jsonl, and
// ledger.jsonl is rewritten as the concatenation of all stage ledgers.
// Starting after step 1 resumes from stage<from-1>.state.jsonl. Rerunning a
// step deletes the outputs of later steps.
struct PipelineOptions {
  std::optional<std::filesystem::path> workDir;
  Step from = kFirstStep;
  Step to = kLastStep;
};

struct PipelineResult {
  WorkingSet items;
  Lexicon lexicon;
  std::vector<LedgerRecord> ledger;  // every stage up to `to`
};

// Runs steps [from, to] in order. Throws Config for missing inputs; a
// failing step leaves the outputs of earlier steps on disk.
PipelineResult run_pipeline(const PipelineInputs& inputs, const PipelineOptions& options = {});

std::filesystem::path stage_file(const std::filesystem::path& dir, Step step,
                                 std::string_view suffix);

}  // namespace mftlex::forge
