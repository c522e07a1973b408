#include "mftlex/forge/stages.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "mftlex/error.hpp"
#include "mftlex/io.hpp"
#include "mftlex/match.hpp"
#include "mftlex/text.hpp"

namespace mftlex::forge {

namespace {

using Json = nlohmann::ordered_json;

bool item_less(const Item& a, const Item& b) {
  if (a.pattern != b.pattern) return a.pattern < b.pattern;
  if (a.origins != b.origins) return a.origins < b.origins;
  return a.categories < b.categories;
}

void sort_items(WorkingSet& items) { std::stable_sort(items.begin(), items.end(), item_less); }

std::vector<std::string> labels(const WorkingSet& items) {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const Item& item : items) out.push_back(item.pattern.notation());
  std::sort(out.begin(), out.end());
  return out;
}

void union_categories(std::vector<MoralCategory>& into, std::span<const MoralCategory> from) {
  for (MoralCategory c : from) {
    if (std::find(into.begin(), into.end(), c) == into.end()) into.push_back(c);
  }
  std::sort(into.begin(), into.end());
}

void union_origins(std::vector<Origin>& into, std::span<const Origin> from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

std::string join(const std::vector<std::string>& parts, std::string_view sep = ", ") {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string category_list(std::span<const MoralCategory> categories) {
  std::vector<std::string> names;
  for (MoralCategory c : categories) names.emplace_back(name(c));
  return join(names);
}

std::vector<std::string> repeat(const std::string& label, std::size_t n) { return std::vector<std::string>(n, label); }

// Wraps a stage's decision records between the stage input and stage output
// summaries. A stage that saw nothing and produced nothing leaves no trace.
class Recorder {
 public:
  Recorder(LedgerStage stage, const WorkingSet& input) : stage_(stage), input_(labels(input)) {}
  Recorder(LedgerStage stage, std::vector<std::string> input) : stage_(stage), input_(std::move(input)) {
    std::sort(input_.begin(), input_.end());
  }

  void add(LedgerStage stage, std::vector<std::string> input, std::vector<std::string> output,
           std::vector<std::string> removed, std::string reason, bool review) {
    records_.push_back({stage, std::move(input), std::move(output), std::move(removed), std::move(reason), review});
  }
  void add(std::vector<std::string> input, std::vector<std::string> output, std::vector<std::string> removed,
           std::string reason, bool review = false) {
    add(stage_, std::move(input), std::move(output), std::move(removed), std::move(reason), review);
  }

  StageResult finish(WorkingSet items) {
    sort_items(items);
    StageResult result;
    std::vector<std::string> output = labels(items);
    if (!input_.empty() || !output.empty() || !records_.empty()) {
      result.records.push_back({stage_, input_, {}, {}, std::string(kStageInputReason), false});
      for (LedgerRecord& r : records_) result.records.push_back(std::move(r));
      result.records.push_back({stage_, {}, std::move(output), {}, std::string(kStageOutputReason), false});
    }
    result.items = std::move(items);
    return result;
  }

 private:
  LedgerStage stage_;
  std::vector<std::string> input_;
  std::vector<LedgerRecord> records_;
};

// Provider answers are untrusted: every word must be a valid exact pattern.
std::vector<std::string> clean_words(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const std::string& w : raw) {
    std::string surface;
    try {
      surface = Pattern(PatternKind::Exact, trim(w)).surface();
    } catch (const Error& e) {
      throw Error(ErrorCode::ProviderFailure, "unusable word '" + w + "': " + e.detail());
    }
    if (std::find(out.begin(), out.end(), surface) == out.end()) out.push_back(std::move(surface));
  }
  return out;
}

std::vector<std::string> members_of(const Item& item) {
  std::vector<std::string> probes{item.pattern.surface()};
  for (const std::string& m : item.members) {
    if (std::find(probes.begin(), probes.end(), m) == probes.end()) probes.push_back(m);
  }
  return probes;
}

}  // namespace

StageResult expand_stems(const Lexicon& source, const WordListProvider& provider) {
  std::vector<std::string> input;
  for (const LexiconEntry& e : source.entries()) input.push_back(e.pattern.notation());
  Recorder rec(LedgerStage::Expand, input);

  std::vector<const LexiconEntry*> entries;
  for (const LexiconEntry& e : source.entries()) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->pattern < b->pattern; });

  WorkingSet out;
  for (const LexiconEntry* e : entries) {
    const std::string notation = e->pattern.notation();
    std::vector<MoralCategory> cats = e->categories;
    std::sort(cats.begin(), cats.end());
    if (!e->pattern.is_stem()) {
      out.push_back({e->pattern, cats, {{e->pattern.surface(), notation}}, {}});
      rec.add({notation}, {}, {}, "word entry kept as is");
      continue;
    }
    std::vector<std::string> words;
    try {
      words = clean_words(provider.words_with_prefix(e->pattern.surface()));
      for (const std::string& w : words) {
        if (!w.starts_with(e->pattern.surface())) {
          throw Error(ErrorCode::ProviderFailure, "word '" + w + "' does not start with the stem");
        }
      }
    } catch (const Error& err) {
      rec.add({notation}, {}, {notation}, "word list lookup failed: " + err.detail(), true);
      continue;
    }
    if (words.empty()) {
      rec.add({notation}, {}, {notation}, "no words with this prefix", true);
      continue;
    }
    for (const std::string& w : words) {
      out.push_back({Pattern(PatternKind::Exact, w), cats, {{w, notation}}, {}});
    }
    rec.add({notation}, words, {notation}, "expanded to " + std::to_string(words.size()) + " words");
  }
  return rec.finish(std::move(out));
}

StageResult apply_exclusions(const WorkingSet& words, std::span<const std::string> exclusions) {
  Recorder rec(LedgerStage::Exclude, words);
  std::set<std::string> excluded;
  for (const std::string& x : exclusions) {
    const std::string_view t = trim(x);
    if (!t.empty()) excluded.insert(Pattern::parse(t).notation());
  }
  WorkingSet out;
  std::map<std::string, std::size_t> copies;
  for (const Item& item : words) {
    const std::string label = item.pattern.notation();
    if (excluded.contains(label)) {
      ++copies[label];
    } else {
      out.push_back(item);
    }
  }
  for (const std::string& x : excluded) {
    const auto it = copies.find(x);
    if (it == copies.end()) {
      rec.add({x}, {}, {}, "exclusion target not present");
    } else {
      rec.add({x}, {}, repeat(x, it->second),
              it->second == 1 ? "excluded" : "excluded (" + std::to_string(it->second) + " copies)");
    }
  }
  return rec.finish(std::move(out));
}

StageResult translate_candidates(const WorkingSet& words, const BilingualProvider& provider) {
  Recorder rec(LedgerStage::Translate, words);
  WorkingSet sorted = words;
  sort_items(sorted);

  std::map<std::string, Item> candidates;
  std::map<std::string, std::size_t> emitted;
  std::map<std::string, std::vector<std::string>> reached_from;
  for (const Item& item : sorted) {
    const std::string label = item.pattern.notation();
    std::vector<std::string> targets;
    try {
      targets = clean_words(provider.translate(item.pattern.surface()));
    } catch (const Error& err) {
      rec.add({label}, {}, {label}, "translation lookup failed: " + err.detail(), true);
      continue;
    }
    if (targets.empty()) {
      rec.add({label}, {}, {label}, "no translations", true);
      continue;
    }
    for (const std::string& t : targets) {
      auto [it, fresh] = candidates.try_emplace(t, Item{Pattern(PatternKind::Exact, t), {}, {}, {}});
      union_categories(it->second.categories, item.categories);
      union_origins(it->second.origins, item.origins);
      ++emitted[t];
      reached_from[t].push_back(label);
    }
    rec.add({label}, targets, {label}, "translated to " + std::to_string(targets.size()) + " candidates");
  }
  for (const auto& [t, n] : emitted) {
    if (n < 2) continue;
    rec.add(repeat(t, n), {}, repeat(t, n - 1), "merged duplicate candidate from " + join(reached_from[t]));
  }
  WorkingSet out;
  for (auto& [t, item] : candidates) out.push_back(std::move(item));
  return rec.finish(std::move(out));
}

StageResult frequency_filter(const WorkingSet& candidates, std::span<const FrequencyTable> tables,
                             FilterLimits limits) {
  if (limits.perStemKeep == 0 || limits.perWordKeep == 0) {
    throw Error(ErrorCode::InvalidArgument, "frequency filter limits must be at least 1");
  }
  if (tables.empty()) throw Error(ErrorCode::InvalidArgument, "frequency filter needs a frequency table");
  Recorder rec(LedgerStage::FrequencyFilter, candidates);

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::set<std::string> sources;
    for (const Origin& o : candidates[i].origins) sources.insert(o.source);
    for (const std::string& s : sources) groups[s].push_back(i);
  }

  std::vector<bool> kept(candidates.size(), false);
  std::vector<std::vector<std::string>> ranks(candidates.size());
  for (const FrequencyTable& table : tables) {
    for (const auto& [source, members] : groups) {
      std::vector<std::size_t> order = members;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = table.count(candidates[a].pattern.surface());
        const auto cb = table.count(candidates[b].pattern.surface());
        if (ca != cb) return ca > cb;
        return candidates[a].pattern < candidates[b].pattern;
      });
      const bool stem = !source.empty() && source.back() == '*';
      const std::size_t k = stem ? limits.perStemKeep : limits.perWordKeep;
      for (std::size_t r = 0; r < order.size(); ++r) {
        const std::size_t c = order[r];
        if (r < k) kept[c] = true;
        ranks[c].push_back(source + " in " + table.corpus_name() + ": rank " + std::to_string(r + 1) + " of " +
                           std::to_string(order.size()) + ", count " +
                           std::to_string(table.count(candidates[c].pattern.surface())) + ", keep " +
                           std::to_string(k));
      }
      if (order.size() > k) {
        const auto boundary = table.count(candidates[order[k - 1]].pattern.surface());
        if (table.count(candidates[order[k]].pattern.surface()) == boundary) {
          std::vector<std::string> tied;
          for (std::size_t c : order) {
            if (table.count(candidates[c].pattern.surface()) == boundary) tied.push_back(candidates[c].pattern.notation());
          }
          rec.add(tied, {}, {},
                  "tie at count " + std::to_string(boundary) + " for " + source + " in " + table.corpus_name() +
                      ", broken by code-point order");
        }
      }
    }
  }

  WorkingSet out;
  std::vector<std::size_t> dropped;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (kept[i]) {
      out.push_back(candidates[i]);
    } else {
      dropped.push_back(i);
    }
  }
  std::sort(dropped.begin(), dropped.end(),
            [&](std::size_t a, std::size_t b) { return item_less(candidates[a], candidates[b]); });
  for (std::size_t i : dropped) {
    const std::string label = candidates[i].pattern.notation();
    rec.add({label}, {}, {label}, "below the cut: " + join(ranks[i], "; "));
  }
  return rec.finish(std::move(out));
}

StageResult frequency_filter(const WorkingSet& candidates, const FrequencyTable& table, FilterLimits limits) {
  return frequency_filter(candidates, std::span<const FrequencyTable>(&table, 1), limits);
}

StageResult merge_to_stems(const WorkingSet& candidates, std::span<const FrequencyTable> tables) {
  Recorder rec(LedgerStage::Merge, candidates);

  std::map<std::string, std::size_t> exact;  // surface -> candidate index
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].pattern.is_stem()) exact.emplace(candidates[i].pattern.surface(), i);
  }
  const auto group_of = [&](const std::string& prefix) {
    std::vector<std::string> group;
    for (auto it = exact.lower_bound(prefix); it != exact.end() && it->first.starts_with(prefix); ++it) {
      group.push_back(it->first);
    }
    return group;
  };
  const auto known_word = [&](const std::string& w) {
    if (exact.contains(w)) return true;
    return std::any_of(tables.begin(), tables.end(), [&](const FrequencyTable& t) { return t.contains(w); });
  };
  // True when the members share no code point beyond `prefix`.
  const auto prefix_is_lcp = [](const std::string& prefix, const std::vector<std::string>& group) {
    std::optional<std::string> next;
    for (const std::string& m : group) {
      if (m.size() == prefix.size()) return true;
      const std::string_view rest = std::string_view(m).substr(prefix.size());
      const std::string head(rest.substr(0, code_point_prefix_bytes(rest, 1)));
      if (next && *next != head) return true;
      next = head;
    }
    return false;
  };

  std::set<std::pair<std::size_t, std::string>> proposals;  // (code points, prefix)
  for (const auto& [surface, idx] : exact) {
    const std::size_t n = code_point_count(surface);
    for (std::size_t len = 2; len <= n; ++len) {
      std::string prefix = surface.substr(0, code_point_prefix_bytes(surface, len));
      if (!known_word(prefix)) continue;
      const auto group = group_of(prefix);
      if (group.size() >= 2 && prefix_is_lcp(prefix, group)) proposals.emplace(len, std::move(prefix));
    }
  }

  std::set<std::string> taken;
  WorkingSet out;
  for (const auto& [len, prefix] : proposals) {
    const auto group = group_of(prefix);
    if (std::any_of(group.begin(), group.end(), [&](const std::string& m) { return taken.contains(m); })) continue;
    Item merged{Pattern(PatternKind::StemPrefix, prefix), {}, {}, group};
    for (const std::string& m : group) {
      taken.insert(m);
      const Item& member = candidates[exact.at(m)];
      union_categories(merged.categories, member.categories);
      union_origins(merged.origins, member.origins);
    }
    const bool is_candidate = exact.contains(prefix);
    rec.add(group, {merged.pattern.notation()}, group,
            "common prefix " + prefix + (is_candidate ? " (a candidate)" : " (a corpus word)"), true);
    out.push_back(std::move(merged));
  }
  for (const Item& c : candidates) {
    if (c.pattern.is_stem() || !taken.contains(c.pattern.surface())) out.push_back(c);
  }
  return rec.finish(std::move(out));
}

StageResult back_translation_check(const WorkingSet& entries, const BilingualProvider& provider,
                                   const Lexicon& source) {
  Recorder rec(LedgerStage::BackTranslate, entries);
  const CompiledLexicon compiled(source);
  WorkingSet sorted = entries;
  sort_items(sorted);

  WorkingSet out;
  for (const Item& item : sorted) {
    const std::string label = item.pattern.notation();
    std::optional<std::string> evidence;
    std::vector<std::string> failures;
    std::vector<std::string> seen;
    for (const std::string& probe : members_of(item)) {
      std::vector<std::string> back;
      try {
        back = provider.reverse(probe);
      } catch (const Error& err) {
        failures.push_back(probe + ": " + err.detail());
        continue;
      }
      for (const std::string& w : back) {
        std::string normalized;
        try {
          normalized = normalize_term(trim(w));
        } catch (const Error&) {
          continue;
        }
        seen.push_back(normalized);
        if (const auto hit = compiled.match_normalized(normalized)) {
          evidence = probe + " -> " + normalized + " matches " + compiled.entry(hit->entry).pattern.notation();
          break;
        }
      }
      if (evidence) break;
    }
    if (evidence) {
      rec.add({label}, {}, {}, "verified: " + *evidence);
      out.push_back(item);
    } else if (!failures.empty()) {
      rec.add({label}, {}, {}, "unverifiable, reverse lookup failed (" + join(failures, "; ") + ")", true);
      out.push_back(item);
    } else {
      rec.add(LedgerStage::BackTranslateFail, {label}, {}, {label},
              seen.empty() ? "no reverse translations"
                           : "no reverse translation in the source dictionary (" + join(seen) + ")",
              false);
    }
  }
  return rec.finish(std::move(out));
}

CategoryDecisions read_decisions(std::istream& in) {
  CategoryDecisions decisions;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::MalformedRecord, "expected '<pattern> TAB <categories>'", line_no);
    }
    std::string key;
    try {
      key = Pattern::parse(trim(line.substr(0, tab))).notation();
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), line_no);
    }
    std::vector<MoralCategory> cats;
    std::string_view rest = line.substr(tab + 1);
    while (!rest.empty()) {
      const std::size_t comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      const auto c = parse_category(cell);
      if (!c) throw Error(ErrorCode::MalformedRecord, "unknown category '" + std::string(cell) + "'", line_no);
      if (std::find(cats.begin(), cats.end(), *c) == cats.end()) cats.push_back(*c);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cats.empty()) throw Error(ErrorCode::MalformedRecord, "no categories given", line_no);
    std::sort(cats.begin(), cats.end());
    if (!decisions.emplace(key, std::move(cats)).second) {
      throw Error(ErrorCode::MalformedRecord, "second decision for " + key, line_no);
    }
  }
  return decisions;
}

CategoryDecisions load_decisions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  return read_decisions(in);
}

StageResult resolve_categories(const WorkingSet& entries, const CategoryDecisions* decisions) {
  std::set<std::string> present;
  for (const Item& item : entries) present.insert(item.pattern.notation());
  if (decisions) {
    for (const auto& [target, cats] : *decisions) {
      if (!present.contains(target)) {
        throw Error(ErrorCode::UnknownDecisionTarget, "decision for '" + target + "', which is not in the working set");
      }
    }
  }

  Recorder rec(LedgerStage::CategoryAssign, entries);
  WorkingSet out = entries;
  sort_items(out);
  for (Item& item : out) {
    const std::string label = item.pattern.notation();
    const auto decision = decisions ? decisions->find(label) : CategoryDecisions::const_iterator{};
    const bool decided = decisions && decision != decisions->end();
    if (item.categories.size() > 1) {
      rec.add(LedgerStage::CategoryConflict, {label}, {}, {},
              "inherited " + category_list(item.categories) + (decided ? "" : "; keeping all"), !decided);
    }
    if (decided) {
      rec.add({label}, {}, {},
              "decided " + category_list(decision->second) + " (inherited " + category_list(item.categories) + ")");
      item.categories = decision->second;
    }
  }
  return rec.finish(std::move(out));
}

Lexicon to_lexicon(const WorkingSet& items, std::string name) {
  WorkingSet sorted = items;
  sort_items(sorted);
  Lexicon lexicon(std::move(name));
  for (const Item& item : sorted) lexicon.add(item.pattern, item.categories);
  return lexicon;
}

std::string to_state_jsonl(const WorkingSet& items) {
  std::string out;
  for (const Item& item : items) {
    Json j;
    j["pattern"] = item.pattern.notation();
    Json cats = Json::array();
    for (MoralCategory c : item.categories) cats.push_back(std::string(name(c)));
    j["categories"] = std::move(cats);
    Json origins = Json::array();
    for (const Origin& o : item.origins) origins.push_back(Json{{"word", o.word}, {"source", o.source}});
    j["origins"] = std::move(origins);
    j["members"] = item.members;
    out += j.dump();
    out += '\n';
  }
  return out;
}

WorkingSet parse_state_jsonl(std::string_view text) {
  WorkingSet items;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      Item item{Pattern::parse(j.at("pattern").get<std::string>()), {}, {}, {}};
      for (const auto& c : j.at("categories")) {
        const auto cat = parse_category(c.get<std::string>());
        if (!cat) throw Error(ErrorCode::MalformedRecord, "unknown category " + c.dump(), line_no);
        item.categories.push_back(*cat);
      }
      for (const auto& o : j.at("origins")) {
        item.origins.push_back({o.at("word").get<std::string>(), o.at("source").get<std::string>()});
      }
      item.members = j.at("members").get<std::vector<std::string>>();
      items.push_back(std::move(item));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, std::string("bad state record: ") + e.what(), line_no);
    }
  }
  return items;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::vector<std::string> words;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = trim(line);
    if (!t.empty() && t.front() != '#') words.emplace_back(t);
  }
  return words;
}

}  // namespace mftlex::forge
