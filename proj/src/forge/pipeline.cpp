#include "mftlex/forge/pipeline.hpp"

#include <array>

#include "mftlex/error.hpp"
#include "mftlex/io.hpp"

namespace mftlex::forge {

namespace {

constexpr std::array<std::string_view, 7> kStepNames{"expand", "exclude",  "translate", "filter",
                                                     "merge",  "backcheck", "resolve"};

Step step_at(int n) { return static_cast<Step>(n); }

void require(bool ok, Step step, std::string_view what) {
  if (!ok) {
    throw Error(ErrorCode::Config, "step '" + std::string(name(step)) + "' needs " + std::string(what));
  }
}

void check_inputs(const PipelineInputs& in, Step step) {
  switch (step) {
    case Step::Expand:
      require(in.source != nullptr, step, "a source dictionary");
      require(in.words != nullptr, step, "a word list");
      break;
    case Step::Translate:
      require(in.bilingual != nullptr, step, "a bilingual dictionary");
      break;
    case Step::Filter:
      require(!in.tables.empty(), step, "at least one frequency table");
      break;
    case Step::BackCheck:
      require(in.source != nullptr, step, "a source dictionary");
      require(in.bilingual != nullptr, step, "a bilingual dictionary");
      break;
    case Step::Exclude:
    case Step::Merge:
    case Step::Resolve:
      break;
  }
}

StageResult run_step(const PipelineInputs& in, Step step, const WorkingSet& current) {
  switch (step) {
    case Step::Expand:
      return expand_stems(*in.source, *in.words);
    case Step::Exclude:
      return apply_exclusions(current, in.exclusions);
    case Step::Translate:
      return translate_candidates(current, *in.bilingual);
    case Step::Filter:
      return frequency_filter(current, in.tables, in.limits);
    case Step::Merge:
      return merge_to_stems(current, in.tables);
    case Step::BackCheck:
      return back_translation_check(current, *in.bilingual, *in.source);
    case Step::Resolve:
      return resolve_categories(current, &in.decisions);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown step");
}

}  // namespace

std::string_view name(Step step) { return kStepNames.at(static_cast<std::size_t>(number(step) - 1)); }

std::optional<Step> parse_step(std::string_view text) {
  for (std::size_t i = 0; i < kStepNames.size(); ++i) {
    if (kStepNames[i] == text || std::to_string(i + 1) == text) return step_at(static_cast<int>(i) + 1);
  }
  return std::nullopt;
}

int number(Step step) { return static_cast<int>(step); }

std::filesystem::path stage_file(const std::filesystem::path& dir, Step step, std::string_view suffix) {
  return dir / ("stage" + std::to_string(number(step)) + std::string(suffix));
}

PipelineResult run_pipeline(const PipelineInputs& inputs, const PipelineOptions& options) {
  const int from = number(options.from);
  const int to = number(options.to);
  if (from > to) throw Error(ErrorCode::Config, "--from must not come after --to");
  for (int n = from; n <= to; ++n) check_inputs(inputs, step_at(n));

  WorkingSet current;
  std::vector<LedgerRecord> ledger;
  if (from > number(kFirstStep)) {
    if (!options.workDir) throw Error(ErrorCode::Config, "resuming needs a work directory");
    const Step previous = step_at(from - 1);
    const auto state = stage_file(*options.workDir, previous, ".state.jsonl");
    if (!std::filesystem::exists(state)) {
      throw Error(ErrorCode::Config, "cannot resume: " + state.string() + " is missing; run step '" +
                                         std::string(name(previous)) + "' first");
    }
    current = parse_state_jsonl(read_file(state));
    for (int n = number(kFirstStep); n < from; ++n) {
      const auto path = stage_file(*options.workDir, step_at(n), ".ledger.jsonl");
      if (!std::filesystem::exists(path)) throw Error(ErrorCode::Config, "cannot resume: " + path.string() + " is missing");
      for (LedgerRecord& r : parse_jsonl(read_file(path))) ledger.push_back(std::move(r));
    }
  }

  if (options.workDir) {
    std::filesystem::create_directories(*options.workDir);
    for (int n = from; n <= number(kLastStep); ++n) {
      for (const char* suffix : {".dic", ".state.jsonl", ".ledger.jsonl"}) {
        std::filesystem::remove(stage_file(*options.workDir, step_at(n), suffix));
      }
    }
  }

  const auto write_ledger = [&] {
    if (options.workDir) write_file_atomic(*options.workDir / "ledger.jsonl", to_jsonl(ledger));
  };
  for (int n = from; n <= to; ++n) {
    const Step step = step_at(n);
    StageResult result;
    try {
      result = run_step(inputs, step, current);
    } catch (...) {
      write_ledger();
      throw;
    }
    if (options.workDir) {
      const auto& dir = *options.workDir;
      write_file_atomic(stage_file(dir, step, ".dic"), serialize_dic(to_lexicon(result.items)));
      write_file_atomic(stage_file(dir, step, ".state.jsonl"), to_state_jsonl(result.items));
      write_file_atomic(stage_file(dir, step, ".ledger.jsonl"), to_jsonl(result.records));
    }
    for (LedgerRecord& r : result.records) ledger.push_back(std::move(r));
    current = std::move(result.items);
  }
  write_ledger();

  Lexicon lexicon = to_lexicon(current);
  return {std::move(current), std::move(lexicon), std::move(ledger)};
}

}  // namespace mftlex::forge
