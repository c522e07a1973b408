#include "mftlex/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mftlex/error.hpp"

namespace mftlex {

std::vector<PoolValidation> validate_pools(std::span<const TokenDocument> docs, const CompiledLexicon& compiled,
                                           const DictSizes& dictSizes, Metric metric) {
  const PoolSet pools = build_pools(docs);
  std::vector<PoolValidation> out;
  for (const WordPool& pool : pools) {
    PoolValidation v;
    v.context = pool.contextFoundation;
    std::array<std::vector<double>, kFoundationCount> values;
    for (const RatioRow& row : frequency_ratios(pool, compiled, dictSizes, Grouping::PerParticipant)) {
      if (row.emptyGroup) continue;
      values[index(row.measuredFoundation)].push_back(metric == Metric::Ratio ? row.normalizedRatio : row.percent);
    }
    v.participants = values[0].size();
    for (std::size_t f = 0; f < kFoundationCount; ++f) {
      double sum = 0.0;
      for (double x : values[f]) sum += x;
      v.means[f] = values[f].empty() ? std::nan("") : sum / static_cast<double>(values[f].size());
    }
    std::stable_sort(v.rank.begin(), v.rank.end(), [&](MoralFoundation a, MoralFoundation b) {
      return v.means[index(a)] > v.means[index(b)];
    });
    if (v.participants == 0) {
      v.note = "empty pool";
      out.push_back(std::move(v));
      continue;
    }
    v.contextFirst = v.rank[0] == v.context && v.means[index(v.rank[0])] > v.means[index(v.rank[1])];
    try {
      v.anova = stats::one_way_anova(values);
      if (v.anova->infiniteF) v.note = "zero within-group variance";
      if (v.anova->precisionWarning) v.note = "p-value at iteration cap";
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateInput) {
        v.degenerate = true;
        v.note = "all values identical";
      } else {
        v.note = e.detail();
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string_view key(Measure m) {
  switch (m) {
    case Measure::Situations:
      return "situations";
    case Measure::TotalWords:
      return "total_words";
    case Measure::DictWords:
      return "dict_words";
  }
  return "";
}

CorrelationReport correlate_measures(std::span<const ParticipantMeasure> measures, std::span<const MfqRow> mfq) {
  CorrelationReport report;
  std::map<std::string, const MfqRow*> scores;
  for (const MfqRow& row : mfq) scores.emplace(row.participantId, &row);
  std::set<std::string> in_docs;
  for (const ParticipantMeasure& m : measures) in_docs.insert(m.participantId);
  for (const std::string& id : in_docs) {
    if (scores.contains(id)) {
      ++report.shared;
    } else {
      report.onlyInDocs.push_back(id);
    }
  }
  for (const auto& [id, row] : scores) {
    if (!in_docs.contains(id)) report.onlyInMfq.push_back(id);
  }
  if (report.shared == 0) return report;

  for (MoralFoundation f : kFoundations) {
    std::vector<double> x;
    std::array<std::vector<double>, 3> y;
    for (const ParticipantMeasure& m : measures) {
      if (m.foundation != f) continue;
      const auto it = scores.find(m.participantId);
      if (it == scores.end()) continue;
      x.push_back(it->second->scores[index(f)]);
      y[0].push_back(static_cast<double>(m.nSituations));
      y[1].push_back(static_cast<double>(m.nTotalWords));
      y[2].push_back(static_cast<double>(m.nDictWords));
    }
    for (Measure measure : {Measure::Situations, Measure::TotalWords, Measure::DictWords}) {
      CorrelationRow row{f, measure, std::nullopt, {}};
      try {
        row.result = stats::pearson(x, y[static_cast<std::size_t>(measure)]);
        if (row.result->precisionWarning) row.note = "p-value at iteration cap";
      } catch (const Error& e) {
        row.note = e.detail();
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace mftlex
