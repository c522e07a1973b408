#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mftlex/io.hpp"
#include "mftlex/lexicon.hpp"
#include "mftlex/match.hpp"

namespace mftlex {

// Parameters of a synthetic study. Every participant writes situations under
// all five foundation contexts. Within a context, the count of own-foundation
// dictionary tokens has mean `ownHits`, each other foundation contributes
// `ownHits / ownToOffRatio` on average, and the remainder is filler. The
// number of situations, total words and own-foundation hits all share one
// latent variable whose correlation with the participant's questionnaire
// score for that foundation is `correlation`.
struct SynthConfig {
  std::size_t participants = 100;
  std::uint64_t seed = 1;
  double correlation = 0.25;
  double ownHits = 12.0;
  double ownToOffRatio = 3.0;
  double meanWords = 60.0;
  double meanSituations = 8.0;
  std::size_t wordsPerCategory = 10;
};

struct SynthCorpus {
  Lexicon lexicon;
  std::vector<TokenDocument> documents;
  std::vector<MfqRow> mfq;
};

SynthCorpus make_synthetic_corpus(const SynthConfig& config);

}  // namespace mftlex
