#include "mftlex/scoring.hpp"

#include <map>

#include "mftlex/error.hpp"

namespace mftlex {

PoolSet build_pools(std::span<const TokenDocument> docs) {
  PoolSet pools;
  for (MoralFoundation f : kFoundations) pools[index(f)].contextFoundation = f;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const TokenDocument& doc = docs[i];
    if (!doc.contextFoundation) {
      throw Error(ErrorCode::MissingContext, "document '" + doc.docId + "' has no foundation context", i + 1);
    }
    WordPool& pool = pools[index(*doc.contextFoundation)];
    pool.documents.push_back(doc);
    pool.poolSize += doc.tokens.size();
  }
  return pools;
}

DictSizes dict_sizes(const Lexicon& lexicon) {
  DictSizes sizes{};
  for (const auto& [category, count] : category_counts(lexicon)) {
    if (const auto f = category.foundation()) sizes[index(*f)] += count;
  }
  return sizes;
}

std::vector<RatioRow> frequency_ratios(const WordPool& pool, const CompiledLexicon& compiled,
                                       const DictSizes& dictSizes, Grouping grouping) {
  for (MoralFoundation f : kFoundations) {
    if (dictSizes[index(f)] == 0) {
      throw Error(ErrorCode::ZeroDictSize, "dictionary has no " + std::string(name(f)) + " words");
    }
  }

  struct Tally {
    std::size_t tokens = 0;
    std::array<std::size_t, kFoundationCount> hits{};
  };
  std::map<std::string, Tally> groups;
  for (std::size_t i = 0; i < pool.documents.size(); ++i) {
    const TokenDocument& doc = pool.documents[i];
    std::string group = kPooledGroup;
    if (grouping == Grouping::PerParticipant) {
      if (!doc.participantId) {
        throw Error(ErrorCode::MissingParticipant, "document '" + doc.docId + "' has no participant id", i + 1);
      }
      group = *doc.participantId;
    }
    Tally& tally = groups[group];
    const MatchReport report = match_document(compiled, doc);
    tally.tokens += report.tokenCount;
    for (std::size_t f = 0; f < kFoundationCount; ++f) tally.hits[f] += report.perFoundationCount[f];
  }

  std::vector<RatioRow> rows;
  rows.reserve(groups.size() * kFoundationCount);
  for (const auto& [group, tally] : groups) {
    for (MoralFoundation f : kFoundations) {
      RatioRow row{group, pool.contextFoundation, f};
      row.rawCount = tally.hits[index(f)];
      row.groupTokens = tally.tokens;
      row.emptyGroup = tally.tokens == 0;
      if (!row.emptyGroup) {
        const auto tokens = static_cast<double>(tally.tokens);
        row.percent = 100.0 * static_cast<double>(row.rawCount) / tokens;
        row.normalizedRatio =
            static_cast<double>(row.rawCount) / (tokens * static_cast<double>(dictSizes[index(f)]));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ParticipantMeasure> participant_measures(std::span<const TokenDocument> docs,
                                                     const CompiledLexicon& compiled) {
  std::map<std::string, std::array<ParticipantMeasure, kFoundationCount>> table;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const TokenDocument& doc = docs[i];
    if (!doc.participantId) {
      throw Error(ErrorCode::MissingParticipant, "document '" + doc.docId + "' has no participant id", i + 1);
    }
    if (!doc.contextFoundation) {
      throw Error(ErrorCode::MissingContext, "document '" + doc.docId + "' has no foundation context", i + 1);
    }
    auto [it, inserted] = table.try_emplace(*doc.participantId);
    if (inserted) {
      for (MoralFoundation f : kFoundations) it->second[index(f)] = {*doc.participantId, f};
    }
    ParticipantMeasure& row = it->second[index(*doc.contextFoundation)];
    const MatchReport report = match_document(compiled, doc);
    row.nSituations += 1;
    row.nTotalWords += report.tokenCount;
    row.nDictWords += report.count(*doc.contextFoundation);
  }

  std::vector<ParticipantMeasure> rows;
  rows.reserve(table.size() * kFoundationCount);
  for (auto& [id, per_foundation] : table) {
    for (auto& row : per_foundation) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mftlex
