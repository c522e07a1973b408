#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mftlex/category.hpp"
#include "mftlex/forge/ledger.hpp"
#include "mftlex/forge/providers.hpp"
#include "mftlex/lexicon.hpp"

namespace mftlex::forge {

// Where a working item came from: a source-language word and the source
// dictionary entry (in notation, "justifi*") it was expanded from.
struct Origin {
  std::string word;
  std::string source;

  bool from_stem() const { return !source.empty() && source.back() == '*'; }
  friend auto operator<=>(const Origin&, const Origin&) = default;
};

// A word or stem moving through the pipeline. Stages 1-2 carry
// source-language words (one origin each, duplicates allowed); from stage 3
// on items are target-language candidates with unique patterns.
struct Item {
  Pattern pattern;
  std::vector<MoralCategory> categories;  // sorted by index
  std::vector<Origin> origins;            // sorted, unique
  std::vector<std::string> members;       // words folded into a merged stem

  friend bool operator==(const Item&, const Item&) = default;
};

using WorkingSet = std::vector<Item>;

struct StageResult {
  WorkingSet items;
  std::vector<LedgerRecord> records;
};

// Step 1. Stems are replaced by every provider word with that prefix
// (carrying the stem's categories); Exact entries pass through. A provider
// failure drops the stem with a review-flagged record.
StageResult expand_stems(const Lexicon& source, const WordListProvider& provider);

// Step 2. Removes every copy of each listed word.
StageResult apply_exclusions(const WorkingSet& words, std::span<const std::string> exclusions);

// Step 3. Each source word becomes its translation candidates; a candidate
// reached from several words keeps the union of their categories and origins.
StageResult translate_candidates(const WorkingSet& words, const BilingualProvider& provider);

struct FilterLimits {
  std::size_t perStemKeep = 10;
  std::size_t perWordKeep = 5;
};

// Step 4. Candidates are grouped by source entry. In every group and table
// the top perStemKeep (stem sources) or perWordKeep (word sources) survive,
// ranked by count, then code-point order. A candidate survives if any
// group/table keeps it. Throws InvalidArgument for zero limits.
StageResult frequency_filter(const WorkingSet& candidates, std::span<const FrequencyTable> tables,
                             FilterLimits limits = {});
StageResult frequency_filter(const WorkingSet& candidates, const FrequencyTable& table,
                             FilterLimits limits = {});

// Step 5. Proposes stems: a prefix of >= 2 code points that is itself a
// candidate or a word of some table, shared by >= 2 candidates and equal to
// their longest common prefix. The shortest such prefixes win. Every merge
// is flagged for review.
StageResult merge_to_stems(const WorkingSet& candidates, std::span<const FrequencyTable> tables);

// Step 6. An item passes when some reverse translation of its surface (or
// of a merged member) matches an entry of the source dictionary. Items whose
// lookups all fail are kept and flagged as unverifiable.
StageResult back_translation_check(const WorkingSet& entries, const BilingualProvider& provider,
                                   const Lexicon& source);

// Pattern notation -> chosen categories.
using CategoryDecisions = std::map<std::string, std::vector<MoralCategory>>;

// `<surface>[*] TAB <Category>[,<Category>...]`
CategoryDecisions read_decisions(std::istream& in);
CategoryDecisions load_decisions(const std::filesystem::path& path);

// Step 7. Applies decisions; unresolved multi-category items keep the union
// and are flagged. Throws UnknownDecisionTarget for decisions naming an
// absent item.
StageResult resolve_categories(const WorkingSet& entries, const CategoryDecisions* decisions);

// Builds a dictionary with the standard category table, entries sorted by
// pattern. Duplicate patterns (stages 1-2) union their categories.
Lexicon to_lexicon(const WorkingSet& items, std::string name = "forge");

// Machine-readable stage state, one JSON object per item.
std::string to_state_jsonl(const WorkingSet& items);
WorkingSet parse_state_jsonl(std::string_view text);

// Newline-delimited word list (exclusions). Blank and '#' lines skipped.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace mftlex::forge
