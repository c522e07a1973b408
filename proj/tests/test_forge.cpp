#include <doctest.h>

#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "ledger_check.hpp"
#include "mftlex/error.hpp"
#include "mftlex/forge/stages.hpp"
#include "mftlex/text.hpp"
#include "support.hpp"

using namespace mftlex;
using namespace mftlex::forge;

namespace {

MoralCategory cat(std::string_view n) { return *parse_category(n); }

Lexicon source_of(std::initializer_list<std::pair<const char*, std::vector<const char*>>> rows) {
  Lexicon lex("source");
  for (const auto& [notation, names] : rows) {
    std::vector<MoralCategory> cats;
    for (const char* n : names) cats.push_back(cat(n));
    lex.add(Pattern::parse(notation), cats);
  }
  return lex;
}

Item word(const std::string& w, std::vector<MoralCategory> cats, const std::string& source) {
  return {Pattern(PatternKind::Exact, w), std::move(cats), {{w, source}}, {}};
}

Item candidate(const std::string& w, const std::string& source, MoralCategory c = MoralCategory::general()) {
  return {Pattern(PatternKind::Exact, w), {c}, {{source, source}}, {}};
}

std::vector<std::string> labels(const WorkingSet& items) {
  std::vector<std::string> out;
  for (const Item& i : items) out.push_back(i.pattern.notation());
  return out;
}

const Item& find(const WorkingSet& items, const std::string& notation) {
  for (const Item& i : items) {
    if (i.pattern.notation() == notation) return i;
  }
  throw std::runtime_error("no item " + notation);
}

std::vector<LedgerRecord> decisions_only(const std::vector<LedgerRecord>& records) {
  std::vector<LedgerRecord> out;
  for (const auto& r : records) {
    if (!is_summary(r)) out.push_back(r);
  }
  return out;
}

struct ScriptedWords : WordListProvider {
  std::function<std::vector<std::string>(std::string_view)> fn;
  std::vector<std::string> words_with_prefix(std::string_view p) const override { return fn(p); }
};

struct ScriptedBilingual : BilingualProvider {
  std::function<std::vector<std::string>(std::string_view)> forward;
  std::function<std::vector<std::string>(std::string_view)> backward;
  std::vector<std::string> translate(std::string_view w) const override { return forward(w); }
  std::vector<std::string> reverse(std::string_view w) const override { return backward(w); }
};

}  // namespace

TEST_CASE("file word list answers prefix queries") {
  const FileWordList list({"Safety", "safe", "safe", "sa", "unsafe", "", "安全", "安全な"});
  CHECK(list.size() == 6);
  CHECK(list.words_with_prefix("safe") == std::vector<std::string>{"safe", "safety"});
  CHECK(list.words_with_prefix("SAF") == std::vector<std::string>{"safe", "safety"});
  CHECK(list.words_with_prefix("安全") == std::vector<std::string>{"安全", "安全な"});
  CHECK(list.words_with_prefix("x").empty());
}

TEST_CASE("justifi expands to 11 Fairness Virtue words") {
  const FileWordList list = FileWordList::load(testing::fixture("justifi_words.txt"));
  CHECK(list.words_with_prefix("justifi").size() == 11);
  const Lexicon source = source_of({{"justifi*", {"FairnessVirtue"}}});
  const StageResult r = expand_stems(source, list);
  REQUIRE(r.items.size() == 11);
  for (const Item& i : r.items) {
    CHECK(i.pattern.surface().starts_with("justifi"));
    CHECK(i.categories == std::vector{cat("FairnessVirtue")});
    CHECK(i.origins == std::vector<Origin>{{i.pattern.surface(), "justifi*"}});
  }
  CHECK(testing::check_bookkeeping(r.records) == "");
  const auto decisions = decisions_only(r.records);
  REQUIRE(decisions.size() == 1);
  CHECK(decisions[0].output.size() == 11);
  CHECK(decisions[0].removed == std::vector<std::string>{"justifi*"});
}

TEST_CASE("expansion fan-out equals the provider counts") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> syllables{"ka", "ki", "ku", "sa", "shi", "ta"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> words;
    for (int i = 0; i < 60; ++i) {
      std::string w;
      for (std::size_t n = 1 + rng() % 4; n > 0; --n) w += syllables[rng() % syllables.size()];
      words.push_back(w);
    }
    const FileWordList list(words);
    Lexicon source;
    for (int i = 0; i < 8; ++i) {
      std::string s;
      for (std::size_t n = 1 + rng() % 2; n > 0; --n) s += syllables[rng() % syllables.size()];
      const Pattern p(rng() % 2 ? PatternKind::StemPrefix : PatternKind::Exact, s);
      const Pattern twin(p.is_stem() ? PatternKind::Exact : PatternKind::StemPrefix, s);
      if (!source.find(twin)) source.add(p, std::vector{cat("HarmVirtue")});
    }
    std::size_t expected = 0;
    for (const LexiconEntry& e : source.entries()) {
      expected += e.pattern.is_stem() ? list.words_with_prefix(e.pattern.surface()).size() : 1;
    }
    const StageResult r = expand_stems(source, list);
    CHECK(r.items.size() == expected);
    CHECK(testing::check_bookkeeping(r.records) == "");
  }
}

TEST_CASE("expansion: exact entries pass, failures are flagged") {
  const Lexicon source = source_of({{"impair", {"HarmVice", "PurityVice"}}, {"gone*", {"HarmVice"}}, {"bad*", {"HarmVice"}}});
  ScriptedWords provider;
  provider.fn = [](std::string_view p) -> std::vector<std::string> {
    if (p == "bad") throw Error(ErrorCode::ProviderFailure, "timeout");
    return {};
  };
  const StageResult r = expand_stems(source, provider);
  CHECK(labels(r.items) == std::vector<std::string>{"impair"});
  CHECK(r.items[0].categories == std::vector{cat("HarmVice"), cat("PurityVice")});
  const auto d = decisions_only(r.records);
  REQUIRE(d.size() == 3);
  CHECK(d[0].input == std::vector<std::string>{"bad*"});
  CHECK(d[0].needsHumanReview);
  CHECK(d[0].reason.find("timeout") != std::string::npos);
  CHECK(d[1].input == std::vector<std::string>{"gone*"});
  CHECK(d[1].needsHumanReview);
  CHECK_FALSE(d[2].needsHumanReview);
  CHECK(testing::check_bookkeeping(r.records) == "");

  provider.fn = [](std::string_view) -> std::vector<std::string> { return {"elsewhere"}; };
  const StageResult wrong = expand_stems(source_of({{"gone*", {"HarmVice"}}}), provider);
  CHECK(wrong.items.empty());
  CHECK(decisions_only(wrong.records)[0].needsHumanReview);
}

TEST_CASE("empty source leaves no records") {
  const FileWordList list({"a"});
  const StageResult r = expand_stems(Lexicon{}, list);
  CHECK(r.items.empty());
  CHECK(r.records.empty());
}

TEST_CASE("exclusions") {
  const WorkingSet words{word("safe", {cat("HarmVirtue")}, "safe*"), word("safekeeping", {cat("HarmVirtue")}, "safe*"),
                         word("safe", {cat("HarmVirtue")}, "safe")};
  SUBCASE("no exclusions is the identity") {
    const StageResult r = apply_exclusions(words, {});
    CHECK(r.items.size() == 3);
    CHECK(decisions_only(r.records).empty());
  }
  SUBCASE("every copy goes, absent words warn") {
    const std::vector<std::string> ex{"SAFE", "kindness"};
    const StageResult r = apply_exclusions(words, ex);
    CHECK(labels(r.items) == std::vector<std::string>{"safekeeping"});
    const auto d = decisions_only(r.records);
    REQUIRE(d.size() == 2);
    CHECK(d[0].input == std::vector<std::string>{"kindness"});
    CHECK(d[0].removed.empty());
    CHECK(d[1].removed == std::vector<std::string>{"safe", "safe"});
    for (const auto& rec : d) CHECK_FALSE(rec.needsHumanReview);
    CHECK(testing::check_bookkeeping(r.records) == "");
  }
}

TEST_CASE("translation") {
  const WorkingSet words{word("safe", {cat("HarmVirtue")}, "safe*"), word("obey", {cat("AuthorityVirtue")}, "obey*"),
                         word("obeyed", {cat("AuthorityVirtue")}, "obey*"), word("lost", {cat("HarmVice")}, "lost")};
  const FileBilingual dict({{"safe", "安全"}, {"safe", "守る"}, {"obey", "守る"}, {"obey", "従う"}, {"obey", "従う"}});
  ScriptedBilingual flaky;
  flaky.forward = [&](std::string_view w) -> std::vector<std::string> {
    if (w == "lost") throw Error(ErrorCode::ProviderFailure, "503");
    return dict.translate(w);
  };
  const StageResult r = translate_candidates(words, flaky);
  CHECK(labels(r.items) == std::vector<std::string>{"守る", "安全", "従う"});
  CHECK(find(r.items, "安全").categories == std::vector{cat("HarmVirtue")});
  const Item& mamoru = find(r.items, "守る");
  CHECK(mamoru.categories == std::vector{cat("HarmVirtue"), cat("AuthorityVirtue")});
  CHECK(mamoru.origins == std::vector<Origin>{{"obey", "obey*"}, {"safe", "safe*"}});

  const auto d = decisions_only(r.records);
  const auto flagged = std::count_if(d.begin(), d.end(), [](const auto& x) { return x.needsHumanReview; });
  CHECK(flagged == 2);  // lost (provider error), obeyed (no translation)
  CHECK(testing::check_bookkeeping(r.records) == "");
}

TEST_CASE("frequency filter") {
  const FrequencyTable table("bccwj", {{"a", 100}, {"b", 50}, {"c", 50}, {"d", 1}});
  SUBCASE("tie at the boundary") {
    const WorkingSet cands{candidate("d", "w"), candidate("c", "w"), candidate("b", "w"), candidate("a", "w")};
    const StageResult r = frequency_filter(cands, table, {.perStemKeep = 10, .perWordKeep = 2});
    CHECK(labels(r.items) == std::vector<std::string>{"a", "b"});
    const auto d = decisions_only(r.records);
    REQUIRE(d.size() == 3);
    CHECK(d[0].input == std::vector<std::string>{"b", "c"});
    CHECK(d[0].removed.empty());
    CHECK(d[0].reason.find("tie") != std::string::npos);
    CHECK(d[1].removed == std::vector<std::string>{"c"});
    CHECK(d[2].removed == std::vector<std::string>{"d"});
    CHECK(testing::check_bookkeeping(r.records) == "");
  }
  SUBCASE("small groups stay whole; unknown words count 0") {
    const WorkingSet cands{candidate("zz", "w"), candidate("a", "w"), candidate("yy", "w")};
    const StageResult r = frequency_filter(cands, table, {.perStemKeep = 10, .perWordKeep = 5});
    CHECK(r.items.size() == 3);
    const StageResult two = frequency_filter(cands, table, {.perStemKeep = 10, .perWordKeep = 2});
    CHECK(labels(two.items) == std::vector<std::string>{"a", "yy"});
  }
  SUBCASE("stem sources use the larger limit") {
    WorkingSet cands;
    for (const char* w : {"a", "b", "c", "d"}) cands.push_back(candidate(w, "x*"));
    CHECK(frequency_filter(cands, table, {.perStemKeep = 3, .perWordKeep = 1}).items.size() == 3);
  }
  SUBCASE("a candidate kept by any group survives") {
    Item shared = candidate("d", "w1");
    shared.origins.push_back({"w2", "w2"});
    const WorkingSet cands{candidate("a", "w1"), shared, candidate("zz", "w2")};
    const StageResult r = frequency_filter(cands, table, {.perStemKeep = 1, .perWordKeep = 1});
    CHECK(labels(r.items) == std::vector<std::string>{"a", "d"});
  }
  SUBCASE("several tables: union of survivors") {
    const std::vector<FrequencyTable> tables{table, FrequencyTable("twc", {{"d", 900}})};
    const WorkingSet cands{candidate("a", "w"), candidate("d", "w"), candidate("b", "w")};
    const StageResult r = frequency_filter(cands, tables, {.perStemKeep = 1, .perWordKeep = 1});
    CHECK(labels(r.items) == std::vector<std::string>{"a", "d"});
  }
  SUBCASE("limits must be positive") {
    CHECK_THROWS_AS(frequency_filter({}, table, {.perStemKeep = 0, .perWordKeep = 1}), Error);
    CHECK_THROWS_AS(frequency_filter({}, std::span<const FrequencyTable>{}, {}), Error);
  }
}

TEST_CASE("merging to stems") {
  const std::vector<FrequencyTable> none;
  SUBCASE("違反 and 違反する") {
    const WorkingSet c{candidate("違反", "violat*", cat("FairnessVice")), candidate("違反する", "violat*", cat("FairnessVice"))};
    const StageResult r = merge_to_stems(c, none);
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].pattern.notation() == "違反*");
    CHECK(r.items[0].members == std::vector<std::string>{"違反", "違反する"});
    CHECK(r.items[0].categories == std::vector{cat("FairnessVice")});
    const auto d = decisions_only(r.records);
    REQUIRE(d.size() == 1);
    CHECK(d[0].needsHumanReview);
    CHECK(testing::check_bookkeeping(r.records) == "");
  }
  SUBCASE("安全 and 安全な unite their categories") {
    const WorkingSet c{candidate("安全な", "safe*", cat("HarmVirtue")), candidate("安全", "safety", cat("PurityVirtue"))};
    const StageResult r = merge_to_stems(c, none);
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].pattern.notation() == "安全*");
    CHECK(r.items[0].categories == std::vector{cat("HarmVirtue"), cat("PurityVirtue")});
    CHECK(r.items[0].origins.size() == 2);
  }
  SUBCASE("a lone word stays exact") {
    const StageResult r = merge_to_stems({candidate("殺す", "kill")}, none);
    CHECK(labels(r.items) == std::vector<std::string>{"殺す"});
    CHECK(decisions_only(r.records).empty());
  }
  SUBCASE("the prefix must be a known word") {
    const WorkingSet c{candidate("安全な", "safe*"), candidate("安全に", "safe*")};
    CHECK(merge_to_stems(c, none).items.size() == 2);
    const std::vector<FrequencyTable> t{FrequencyTable("c", {{"安全", 5}})};
    const StageResult r = merge_to_stems(c, t);
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].pattern.notation() == "安全*");
    CHECK(decisions_only(r.records)[0].reason.find("corpus") != std::string::npos);
  }
  SUBCASE("the prefix must be the longest common prefix") {
    // な (E3 81 AA) and に (E3 81 AB) share two bytes; the stem must not split them.
    const WorkingSet c{candidate("abcx", "s"), candidate("abcy", "s")};
    const std::vector<FrequencyTable> t{FrequencyTable("c", {{"ab", 5}})};
    CHECK(merge_to_stems(c, t).items.size() == 2);
    const std::vector<FrequencyTable> t2{FrequencyTable("c", {{"ab", 5}, {"abc", 1}})};
    CHECK(labels(merge_to_stems(c, t2).items) == std::vector<std::string>{"abc*"});
  }
  SUBCASE("shortest prefix claims its members first") {
    const WorkingSet c{candidate("保護", "p"), candidate("保護する", "p"), candidate("保護者", "p"),
                       candidate("保護者会", "p")};
    const StageResult r = merge_to_stems(c, none);
    REQUIRE(r.items.size() == 1);
    CHECK(r.items[0].pattern.notation() == "保護*");
    CHECK(r.items[0].members.size() == 4);
  }
  SUBCASE("single code point prefixes are never proposed") {
    const WorkingSet c{candidate("a", "s"), candidate("ab", "s")};
    CHECK(merge_to_stems(c, none).items.size() == 2);
  }
}

TEST_CASE("back-translation check") {
  const Lexicon source = source_of({{"safe*", {"HarmVirtue"}}, {"kill", {"HarmVice"}}});
  ScriptedBilingual provider;
  provider.backward = [](std::string_view w) -> std::vector<std::string> {
    if (w == "安全") return {"Safety"};
    if (w == "倒す") return {"defeat", "topple"};
    if (w == "殺害") return {"killing"};
    if (w == "壊れ") throw Error(ErrorCode::ProviderFailure, "down");
    if (w == "保護する") return {"safeguard"};
    return {};
  };
  Item stem{Pattern::parse("保護*"), {cat("HarmVirtue")}, {}, {"保護", "保護する"}};
  const WorkingSet items{candidate("安全", "safe*"), candidate("倒す", "kill"), candidate("殺害", "kill"),
                         candidate("壊れ", "kill"), stem};
  const StageResult r = back_translation_check(items, provider, source);
  CHECK(labels(r.items) == std::vector<std::string>{"保護*", "壊れ", "安全"});
  std::size_t failures = 0;
  for (const auto& rec : decisions_only(r.records)) {
    if (rec.stage == LedgerStage::BackTranslateFail) {
      ++failures;
      CHECK(rec.removed.size() == 1);
    }
    if (rec.input == std::vector<std::string>{"壊れ"}) CHECK(rec.needsHumanReview);
  }
  CHECK(failures == 2);  // 倒す (disjoint), 殺害 (killing is not the exact word kill)
  CHECK(testing::check_bookkeeping(r.records) == "");
}

TEST_CASE("category resolution") {
  const WorkingSet items{{Pattern::parse("守る"), {cat("HarmVirtue"), cat("AuthorityVirtue")}, {}, {}},
                         {Pattern::parse("損なう"), {cat("HarmVice"), cat("PurityVice")}, {}, {}},
                         {Pattern::parse("殺す"), {cat("HarmVice")}, {}, {}}};
  std::istringstream in("# decisions\n守る\tHarm Virtue\n");
  const CategoryDecisions decisions = read_decisions(in);
  const StageResult r = resolve_categories(items, &decisions);
  CHECK(find(r.items, "守る").categories == std::vector{cat("HarmVirtue")});
  CHECK(find(r.items, "損なう").categories == std::vector{cat("HarmVice"), cat("PurityVice")});
  CHECK(find(r.items, "殺す").categories == std::vector{cat("HarmVice")});
  const auto d = decisions_only(r.records);
  REQUIRE(d.size() == 3);
  CHECK(std::count_if(d.begin(), d.end(), [](const auto& x) { return x.needsHumanReview; }) == 1);
  CHECK(std::count_if(d.begin(), d.end(), [](const auto& x) { return x.stage == LedgerStage::CategoryConflict; }) == 2);

  std::istringstream stray("消えた\tHarmVice\n");
  const CategoryDecisions bad = read_decisions(stray);
  try {
    resolve_categories(items, &bad);
    FAIL("expected UnknownDecisionTarget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownDecisionTarget);
  }
  CHECK(resolve_categories(items, nullptr).items.size() == 3);

  for (const char* text : {"守る HarmVirtue\n", "守る\tLiberty\n", "守る\tHarmVirtue\n守る\tHarmVice\n", "守る\t\n"}) {
    std::istringstream broken(text);
    CHECK_THROWS_AS(read_decisions(broken), Error);
  }
}

TEST_CASE("ledger lines") {
  const LedgerRecord r{LedgerStage::Merge, {"違反", "違反する"}, {"違反*"}, {"違反", "違反する"}, "common \"prefix\"", true};
  const std::string line = to_json_line(r);
  CHECK(line ==
        "{\"stage\":\"Merge\",\"input\":[\"違反\",\"違反する\"],\"output\":[\"違反*\"],\"removed\":[\"違反\",\"違反する\"],"
        "\"reason\":\"common \\\"prefix\\\"\",\"needsHumanReview\":true}");
  CHECK(parse_json_line(line) == r);
  CHECK(parse_jsonl(to_jsonl({r, r})).size() == 2);
  CHECK_THROWS_AS(parse_json_line("{\"stage\":\"Nope\"}"), Error);
  CHECK_THROWS_AS(parse_jsonl("{}\nnot json\n"), Error);
  for (LedgerStage s : {LedgerStage::Expand, LedgerStage::BackTranslateFail, LedgerStage::CategoryAssign}) {
    CHECK(parse_ledger_stage(to_string(s)) == s);
  }
}

TEST_CASE("state lines round trip") {
  const WorkingSet items{{Pattern::parse("保護*"), {cat("HarmVirtue")}, {{"protect", "protect*"}}, {"保護", "保護する"}},
                         word("kill", {cat("HarmVice"), cat("PurityVice")}, "kill")};
  CHECK(parse_state_jsonl(to_state_jsonl(items)) == items);
  CHECK(parse_state_jsonl("").empty());
  CHECK_THROWS_AS(parse_state_jsonl("{\"pattern\":\"x\"}\n"), Error);
}

TEST_CASE("stage lexicons") {
  const WorkingSet items{word("safe", {cat("HarmVirtue")}, "safe*"), word("safe", {cat("HarmVice")}, "safe"),
                         word("kill", {cat("HarmVice")}, "kill")};
  const Lexicon lex = to_lexicon(items);
  REQUIRE(lex.size() == 2);
  CHECK(lex.entries()[0].pattern.notation() == "kill");
  CHECK(lex.entries()[1].categories.size() == 2);
  CHECK(lex.entries()[1].has(cat("HarmVirtue")));
  CHECK(lex.entries()[1].has(cat("HarmVice")));
}
