#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "mftlex/lexicon.hpp"

namespace testing {

// Short surfaces over a tiny alphabet, so prefixes collide often.
inline std::string random_surface(std::mt19937_64& rng, std::size_t max_len = 4) {
  static const std::vector<std::string> alphabet{"a", "b", "c", "é", "安", "全", "ー"};
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t n = len(rng); n > 0; --n) s += alphabet[pick(rng)];
  return s;
}

// A random valid lexicon: random category table (ids 1..99), up to
// `max_entries` entries with 1-3 categories each.
inline mftlex::Lexicon random_lexicon(std::mt19937_64& rng, std::size_t max_entries = 50,
                                      bool random_table = true) {
  using namespace mftlex;
  CategoryTable table;
  if (random_table) {
    auto cats = all_categories();
    std::shuffle(cats.begin(), cats.end(), rng);
    const std::size_t used = std::uniform_int_distribution<std::size_t>(1, cats.size())(rng);
    std::vector<int> ids(99);
    for (int i = 0; i < 99; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < used; ++i) table.emplace(ids[i], cats[i]);
  } else {
    table = standard_category_table();
  }
  std::vector<MoralCategory> available;
  for (const auto& [id, c] : table) available.push_back(c);

  Lexicon lex("random", table);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_entries)(rng);
  std::uniform_int_distribution<std::size_t> ncat(1, std::min<std::size_t>(3, available.size()));
  std::uniform_int_distribution<std::size_t> pick(0, available.size() - 1);
  while (lex.size() < n) {
    const Pattern p(rng() % 2 ? PatternKind::StemPrefix : PatternKind::Exact, random_surface(rng));
    const Pattern other(p.is_stem() ? PatternKind::Exact : PatternKind::StemPrefix, p.surface());
    if (lex.find(p) || lex.find(other)) {
      // Lexicons of short random surfaces saturate; stop instead of spinning.
      if (rng() % 8 == 0) break;
      continue;
    }
    std::vector<MoralCategory> cats;
    for (std::size_t k = ncat(rng); k > 0; --k) {
      const MoralCategory c = available[pick(rng)];
      if (std::find(cats.begin(), cats.end(), c) == cats.end()) cats.push_back(c);
    }
    lex.add(p, cats);
  }
  return lex;
}

}  // namespace testing
