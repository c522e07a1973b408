#include "mftlex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace mftlex {

namespace {

std::string numbered(std::string_view prefix, std::size_t i) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%03zu", i);
  return std::string(prefix) + buffer;
}

constexpr std::size_t kFillerWords = 200;

}  // namespace

SynthCorpus make_synthetic_corpus(const SynthConfig& config) {
  SynthCorpus corpus;
  corpus.lexicon = Lexicon("synthetic");

  // Per foundation, the tokens that hit it: half exact words, half stem
  // forms with a suffix attached.
  std::array<std::vector<std::string>, kFoundationCount> hit_tokens;
  for (MoralCategory c : all_categories()) {
    std::string base(name(c));
    for (char& ch : base) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    for (std::size_t i = 0; i < config.wordsPerCategory; ++i) {
      const bool stem = i % 2 == 1;
      const std::string surface = numbered(stem ? base + "stem" : base, i);
      const MoralCategory categories[] = {c};
      corpus.lexicon.add(Pattern(stem ? PatternKind::StemPrefix : PatternKind::Exact, surface), categories);
      if (const auto f = c.foundation()) hit_tokens[index(*f)].push_back(stem ? surface + "ing" : surface);
    }
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double rho = std::clamp(config.correlation, -1.0, 1.0);
  const double off_mean = config.ownHits / config.ownToOffRatio;
  const auto off_trials = static_cast<int>(std::lround(4.0 * off_mean));

  const auto pick = [&rng](const std::vector<std::string>& from) -> const std::string& {
    std::uniform_int_distribution<std::size_t> which(0, from.size() - 1);
    return from[which(rng)];
  };
  const auto nonneg_round = [](double v) { return static_cast<std::size_t>(std::max(0.0, std::round(v))); };

  std::vector<std::string> filler;
  for (std::size_t i = 0; i < kFillerWords; ++i) filler.push_back(numbered("filler", i));

  for (std::size_t p = 0; p < config.participants; ++p) {
    MfqRow mfq{numbered("p", p), {}};
    for (MoralFoundation f : kFoundations) {
      const double z = normal(rng);
      mfq.scores[index(f)] = static_cast<int>(std::clamp(std::round(20.0 + 4.0 * z), 0.0, 30.0));
      const double latent = rho * z + std::sqrt(1.0 - rho * rho) * normal(rng);

      const std::size_t situations = std::max<std::size_t>(1, nonneg_round(config.meanSituations + 2.0 * latent));
      const std::size_t own = nonneg_round(config.ownHits + config.ownHits / 4.0 * latent);
      std::vector<std::string> tokens;
      for (std::size_t i = 0; i < own; ++i) tokens.push_back(pick(hit_tokens[index(f)]));
      for (MoralFoundation other : kFoundations) {
        if (other == f) continue;
        std::binomial_distribution<int> off(off_trials, 0.25);
        for (int i = off(rng); i > 0; --i) tokens.push_back(pick(hit_tokens[index(other)]));
      }
      const std::size_t total = std::max(tokens.size(), nonneg_round(config.meanWords + config.meanWords / 5.0 * latent));
      while (tokens.size() < total) tokens.push_back(pick(filler));
      std::shuffle(tokens.begin(), tokens.end(), rng);

      // Cut the token stream into `situations` documents.
      std::vector<std::size_t> cuts;
      std::uniform_int_distribution<std::size_t> cut(0, tokens.size());
      for (std::size_t i = 1; i < situations; ++i) cuts.push_back(cut(rng));
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(tokens.size());
      std::size_t begin = 0;
      for (std::size_t s = 0; s < cuts.size(); ++s) {
        TokenDocument doc;
        doc.participantId = mfq.participantId;
        doc.docId = mfq.participantId + "#" + std::string(key(f)) + std::to_string(s);
        doc.contextFoundation = f;
        doc.contextPolarity = s % 2 == 0 ? ContextPolarity::Virtue : ContextPolarity::Vice;
        doc.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                          tokens.begin() + static_cast<std::ptrdiff_t>(cuts[s]));
        begin = cuts[s];
        corpus.documents.push_back(std::move(doc));
      }
    }
    corpus.mfq.push_back(std::move(mfq));
  }
  return corpus;
}

}  // namespace mftlex
