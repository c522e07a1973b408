#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mftlex/category.hpp"
#include "mftlex/lexicon.hpp"
#include "mftlex/match.hpp"

namespace mftlex {

// All documents written under one foundation context, Virtue and Vice merged.
struct WordPool {
  MoralFoundation contextFoundation = MoralFoundation::Harm;
  std::vector<TokenDocument> documents;
  std::size_t poolSize = 0;  // total tokens
};

using PoolSet = std::array<WordPool, kFoundationCount>;  // indexed by foundation

// Partitions documents by contextFoundation. Throws MissingContext (with
// the 1-based document number) when a document has none.
PoolSet build_pools(std::span<const TokenDocument> docs);

enum class Grouping { PerParticipant, Pooled };

inline constexpr const char* kPooledGroup = "pooled";

struct RatioRow {
  std::string group;  // participant id, or "pooled"
  MoralFoundation contextFoundation;
  MoralFoundation measuredFoundation;
  std::size_t rawCount = 0;
  std::size_t groupTokens = 0;
  double percent = 0.0;          // 100 * raw / tokens
  double normalizedRatio = 0.0;  // raw / (tokens * dictSize)
  bool emptyGroup = false;       // zero tokens; percent and ratio forced to 0
};

using DictSizes = std::array<std::size_t, kFoundationCount>;

// Per foundation: Virtue count + Vice count (category memberships).
DictSizes dict_sizes(const Lexicon& lexicon);

// One row per (group, measured foundation). Groups are participants in
// lexicographic id order, or the single pooled group. Throws ZeroDictSize
// and, for per-participant grouping, MissingParticipant.
std::vector<RatioRow> frequency_ratios(const WordPool& pool, const CompiledLexicon& compiled,
                                       const DictSizes& dictSizes, Grouping grouping);

struct ParticipantMeasure {
  std::string participantId;
  MoralFoundation foundation;
  std::size_t nSituations = 0;
  std::size_t nTotalWords = 0;
  std::size_t nDictWords = 0;  // hits of the context foundation itself
};

// Five rows per participant (zero rows where nothing was written), ordered
// by participant id then foundation. One document is one situation.
std::vector<ParticipantMeasure> participant_measures(std::span<const TokenDocument> docs,
                                                     const CompiledLexicon& compiled);

}  // namespace mftlex
