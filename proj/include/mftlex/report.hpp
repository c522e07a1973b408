#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mftlex/category.hpp"
#include "mftlex/io.hpp"
#include "mftlex/lexicon.hpp"
#include "mftlex/match.hpp"
#include "mftlex/scoring.hpp"
#include "mftlex/stats.hpp"

namespace mftlex {

enum class Metric { Percent, Ratio };

// ANOVA of one context pool: the five measured-foundation value vectors over
// participants. Participants with no tokens in the pool are left out.
struct PoolValidation {
  MoralFoundation context = MoralFoundation::Harm;
  std::size_t participants = 0;
  std::array<double, kFoundationCount> means{};
  std::optional<stats::AnovaResult> anova;  // empty when the test could not run
  bool degenerate = false;                  // every value identical: reported as F = 0, p = 1
  std::array<MoralFoundation, kFoundationCount> rank = kFoundations;  // by mean, descending
  bool contextFirst = false;
  std::string note;
};

std::vector<PoolValidation> validate_pools(std::span<const TokenDocument> docs, const CompiledLexicon& compiled,
                                           const DictSizes& dictSizes, Metric metric = Metric::Ratio);

enum class Measure { Situations, TotalWords, DictWords };
std::string_view key(Measure m);  // "situations", "total_words", "dict_words"

struct CorrelationRow {
  MoralFoundation foundation = MoralFoundation::Harm;
  Measure measure = Measure::Situations;
  std::optional<stats::CorrelationResult> result;  // empty when skipped
  std::string note;
};

struct CorrelationReport {
  std::vector<CorrelationRow> rows;  // foundation-major, three measures each
  std::size_t shared = 0;            // participants present in both inputs
  std::vector<std::string> onlyInDocs;
  std::vector<std::string> onlyInMfq;
};

CorrelationReport correlate_measures(std::span<const ParticipantMeasure> measures, std::span<const MfqRow> mfq);

}  // namespace mftlex
