#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "mftlex/error.hpp"
#include "mftlex/scoring.hpp"
#include "mftlex/synth.hpp"
#include "support.hpp"

using namespace mftlex;

namespace {

MoralCategory cat(std::string_view n) { return *parse_category(n); }

TokenDocument doc(std::string participant, MoralFoundation f, std::vector<std::string> tokens) {
  static int counter = 0;
  return {participant + "#" + std::to_string(++counter), participant, f, ContextPolarity::Virtue, std::move(tokens)};
}

const RatioRow& row_for(const std::vector<RatioRow>& rows, const std::string& group, MoralFoundation measured) {
  for (const auto& r : rows) {
    if (r.group == group && r.measuredFoundation == measured) return r;
  }
  throw std::runtime_error("row not found");
}

const DictSizes kUnitSizes{1, 1, 1, 1, 1};

}  // namespace

TEST_CASE("pools partition documents by context") {
  CHECK(build_pools({}).size() == 5);
  for (const WordPool& p : build_pools({})) {
    CHECK(p.documents.empty());
    CHECK(p.poolSize == 0);
  }
  std::vector<TokenDocument> docs{doc("a", MoralFoundation::Harm, {"x", "y"}),
                                  doc("b", MoralFoundation::Purity, {"z"}),
                                  doc("a", MoralFoundation::Harm, {"x", "y", "z"})};
  docs[2].contextPolarity = ContextPolarity::Vice;
  const PoolSet pools = build_pools(docs);
  CHECK(pools[index(MoralFoundation::Harm)].poolSize == 5);
  CHECK(pools[index(MoralFoundation::Harm)].documents.size() == 2);
  CHECK(pools[index(MoralFoundation::Purity)].documents.size() == 1);

  docs.push_back({"orphan", std::nullopt, std::nullopt, std::nullopt, {"x"}});
  try {
    build_pools(docs);
    FAIL("expected MissingContext");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingContext);
    CHECK(e.line() == 4);
  }
}

TEST_CASE("pools ignore input order") {
  std::mt19937_64 rng(3);
  const SynthCorpus corpus = make_synthetic_corpus({.participants = 10, .seed = 5});
  std::vector<TokenDocument> shuffled = corpus.documents;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const PoolSet a = build_pools(corpus.documents), b = build_pools(shuffled);
  std::size_t total = 0;
  for (const TokenDocument& d : corpus.documents) total += d.tokens.size();
  std::size_t pooled = 0;
  for (std::size_t f = 0; f < kFoundationCount; ++f) {
    CHECK(a[f].poolSize == b[f].poolSize);
    pooled += a[f].poolSize;
    std::vector<std::string> ia, ib;
    for (const auto& d : a[f].documents) ia.push_back(d.docId);
    for (const auto& d : b[f].documents) ib.push_back(d.docId);
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    CHECK(ia == ib);
  }
  CHECK(pooled == total);
}

TEST_CASE("foundation dictionary sizes add Virtue and Vice") {
  const DictSizes sizes = dict_sizes(load_dic(testing::fixture("table2.dic")));
  CHECK(sizes == DictSizes{4, 5, 8, 6, 8});
}

TEST_CASE("ratio arithmetic: 2 Harm hits in 10 tokens") {
  Lexicon lex;
  lex.add(Pattern::parse("safe*"), std::vector{cat("HarmVirtue")});
  lex.add(Pattern::parse("kill"), std::vector{cat("HarmVice")});
  WordPool pool;
  pool.documents.push_back(doc("p1", MoralFoundation::Harm,
                               {"safety", "a", "b", "c", "kill", "d", "e", "f", "g", "h"}));
  const DictSizes sizes{144, 75, 141, 182, 176};  // Virtue + Vice per foundation in the full dictionary
  const auto rows = frequency_ratios(pool, CompiledLexicon(lex), sizes, Grouping::PerParticipant);
  REQUIRE(rows.size() == 5);
  const RatioRow& harm = row_for(rows, "p1", MoralFoundation::Harm);
  CHECK(harm.rawCount == 2);
  CHECK(harm.groupTokens == 10);
  CHECK(harm.percent == doctest::Approx(20.0));
  CHECK(harm.normalizedRatio == doctest::Approx(2.0 / 1440.0).epsilon(1e-12));
  CHECK(harm.normalizedRatio == doctest::Approx(0.001389).epsilon(1e-3));
  for (MoralFoundation f : {MoralFoundation::Fairness, MoralFoundation::Purity}) {
    CHECK(row_for(rows, "p1", f).rawCount == 0);
    CHECK(row_for(rows, "p1", f).normalizedRatio == 0.0);
  }
}

TEST_CASE("three-token document: Harm percent 66.67") {
  WordPool pool;
  pool.contextFoundation = MoralFoundation::Harm;
  pool.documents.push_back(doc("p", MoralFoundation::Harm, {"安全", "殺す", "昼食"}));
  const Lexicon lex = load_dic(testing::fixture("table2.dic"));
  const auto rows = frequency_ratios(pool, CompiledLexicon(lex), dict_sizes(lex), Grouping::Pooled);
  const RatioRow& harm = row_for(rows, kPooledGroup, MoralFoundation::Harm);
  CHECK(harm.percent == doctest::Approx(200.0 / 3.0));
  CHECK(harm.normalizedRatio == doctest::Approx(2.0 / (3.0 * 4.0)));
}

TEST_CASE("ratio edge cases") {
  const Lexicon lex = load_dic(testing::fixture("table2.dic"));
  const CompiledLexicon c(lex);
  WordPool pool;
  pool.documents.push_back(doc("a", MoralFoundation::Harm, {}));
  pool.documents.push_back(doc("b", MoralFoundation::Harm, {"昼食"}));

  SUBCASE("zero-token group is kept and flagged") {
    const auto rows = frequency_ratios(pool, c, dict_sizes(lex), Grouping::PerParticipant);
    REQUIRE(rows.size() == 10);
    CHECK(row_for(rows, "a", MoralFoundation::Harm).emptyGroup);
    CHECK(row_for(rows, "a", MoralFoundation::Harm).percent == 0.0);
    CHECK_FALSE(row_for(rows, "b", MoralFoundation::Harm).emptyGroup);
    CHECK(rows.front().group == "a");
  }
  SUBCASE("zero dictionary size") {
    CHECK_THROWS_AS(frequency_ratios(pool, c, DictSizes{1, 0, 1, 1, 1}, Grouping::Pooled), Error);
  }
  SUBCASE("per-participant grouping needs ids") {
    pool.documents[1].participantId.reset();
    try {
      frequency_ratios(pool, c, dict_sizes(lex), Grouping::PerParticipant);
      FAIL("expected MissingParticipant");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingParticipant);
    }
    CHECK(frequency_ratios(pool, c, dict_sizes(lex), Grouping::Pooled).size() == 5);
  }
}

TEST_CASE("ratio properties on synthetic data") {
  const SynthCorpus corpus = make_synthetic_corpus({.participants = 20, .seed = 9});
  const CompiledLexicon c(corpus.lexicon);
  const DictSizes sizes = dict_sizes(corpus.lexicon);
  for (const WordPool& pool : build_pools(corpus.documents)) {
    const auto per = frequency_ratios(pool, c, sizes, Grouping::PerParticipant);
    const auto pooled = frequency_ratios(pool, c, sizes, Grouping::Pooled);
    REQUIRE(pooled.size() == 5);
    for (const RatioRow& r : per) {
      CHECK(r.percent >= 0.0);
      CHECK(r.percent <= 100.0);
      CHECK((r.normalizedRatio == 0.0) == (r.rawCount == 0));
    }
    for (MoralFoundation f : kFoundations) {
      std::size_t sum = 0;
      for (const RatioRow& r : per) sum += r.measuredFoundation == f ? r.rawCount : 0;
      CHECK(row_for(pooled, kPooledGroup, f).rawCount == sum);
      CHECK(row_for(pooled, kPooledGroup, f).groupTokens == pool.poolSize);
    }

    // Doubling every document leaves the ratios unchanged.
    WordPool doubled = pool;
    for (const TokenDocument& d : pool.documents) doubled.documents.push_back(d);
    const auto twice = frequency_ratios(doubled, c, sizes, Grouping::PerParticipant);
    REQUIRE(twice.size() == per.size());
    for (std::size_t i = 0; i < per.size(); ++i) {
      CHECK(twice[i].rawCount == 2 * per[i].rawCount);
      CHECK(twice[i].percent == doctest::Approx(per[i].percent).epsilon(1e-12));
      CHECK(twice[i].normalizedRatio == doctest::Approx(per[i].normalizedRatio).epsilon(1e-12));
    }
  }
}

TEST_CASE("participant measures") {
  Lexicon lex;
  lex.add(Pattern::parse("kill"), std::vector{cat("HarmVice")});
  lex.add(Pattern::parse("fair*"), std::vector{cat("FairnessVirtue")});
  const CompiledLexicon c(lex);
  CHECK(participant_measures({}, c).empty());

  const std::vector<TokenDocument> docs{
      doc("p", MoralFoundation::Harm, {"kill", "a", "b", "c", "d"}),
      doc("p", MoralFoundation::Harm, {"kill", "fair", "b", "c", "d"}),
      doc("p", MoralFoundation::Harm, {"a", "a", "b", "c", "d"}),
  };
  const auto rows = participant_measures(docs, c);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].foundation == MoralFoundation::Harm);
  CHECK(rows[0].nSituations == 3);
  CHECK(rows[0].nTotalWords == 15);
  CHECK(rows[0].nDictWords == 2);  // fair counts for Fairness, not for the Harm context
  for (std::size_t i = 1; i < 5; ++i) CHECK(rows[i].nSituations == 0);
}

TEST_CASE("participant measures equal a naive recount") {
  const SynthCorpus corpus = make_synthetic_corpus({.participants = 15, .seed = 21});
  const auto rows = participant_measures(corpus.documents, CompiledLexicon(corpus.lexicon));

  // Recount by scanning each token against every entry.
  std::map<std::pair<std::string, std::size_t>, std::array<std::size_t, 3>> naive;
  for (const TokenDocument& d : corpus.documents) {
    auto& cell = naive[{*d.participantId, index(*d.contextFoundation)}];
    cell[0] += 1;
    cell[1] += d.tokens.size();
    for (const std::string& t : d.tokens) {
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < corpus.lexicon.size(); ++i) {
        const Pattern& p = corpus.lexicon.entries()[i].pattern;
        if (p.matches(t) && (!best || p.surface().size() > corpus.lexicon.entries()[*best].pattern.surface().size())) best = i;
      }
      if (!best) continue;
      for (MoralCategory k : corpus.lexicon.entries()[*best].categories) {
        if (k.foundation() == d.contextFoundation) {
          cell[2] += 1;
          break;
        }
      }
    }
  }
  REQUIRE(rows.size() == 15 * 5);
  for (const ParticipantMeasure& m : rows) {
    const auto& cell = naive[{m.participantId, index(m.foundation)}];
    CHECK(m.nSituations == cell[0]);
    CHECK(m.nTotalWords == cell[1]);
    CHECK(m.nDictWords == cell[2]);
  }
}
