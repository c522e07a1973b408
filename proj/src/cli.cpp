#include "mftlex/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include "mftlex/error.hpp"
#include "mftlex/forge/http_provider.hpp"
#include "mftlex/forge/pipeline.hpp"
#include "mftlex/io.hpp"
#include "mftlex/lexicon.hpp"
#include "mftlex/match.hpp"
#include "mftlex/report.hpp"
#include "mftlex/scoring.hpp"
#include "mftlex/synth.hpp"

namespace mftlex::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string dict;
  std::string docs;
  std::string mfq;
  std::string out;
  std::string grouping = "per-participant";
  std::string metric;
  std::uint64_t seed = 1;
  std::string segment;
  std::string vocab;

  std::string dictPath;  // positional for `dict ...`
  bool countsOnly = false;

  std::string source;
  std::string words;
  std::string wordsUrl;
  std::string bilingual;
  std::string reverse;
  std::string translateUrl;
  std::string reverseUrl;
  std::vector<std::string> freq;
  std::string exclusions;
  std::string decisions;
  std::string workDir;
  std::string cacheDir;
  std::size_t perStemKeep = 10;
  std::size_t perWordKeep = 5;
  std::string from;
  std::string to;

  std::size_t participants = 100;
  double correlation = 0.25;
  std::string outDir;
};

// Bad flags or missing files: exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_flag(const std::string& value, std::string_view flag, std::string_view command) {
  if (value.empty()) throw UsageError(std::string(command) + " needs " + std::string(flag));
}

void require_file(const std::string& path, std::string_view flag) {
  if (!path.empty() && !fs::is_regular_file(path)) {
    throw UsageError(std::string(flag) + ": no such file '" + path + "'");
  }
}

// Re-raises with the file name in front, compiler style ("a.dic:3: ...").
template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string where = path;
    if (e.line()) where += ":" + std::to_string(*e.line());
    throw Error(e.code(), where + ": " + e.detail());
  }
}

Lexicon load_lexicon(const std::string& path, std::vector<Diagnostic>* warnings = nullptr) {
  require_file(path, "--dict");
  return with_path(path, [&] { return load_dic(path, warnings); });
}

std::vector<TokenDocument> load_docs(const Options& o) {
  require_file(o.docs, "--docs");
  std::optional<GreedySegmenter> segmenter;
  if (!o.segment.empty()) {
    if (o.segment != "greedy") throw UsageError("--segment: only 'greedy' is supported");
    require_flag(o.vocab, "--vocab", "--segment greedy");
    require_file(o.vocab, "--vocab");
    segmenter = with_path(o.vocab, [&] { return GreedySegmenter::from_file(o.vocab); });
  }
  return with_path(o.docs, [&] { return load_documents(o.docs, segmenter ? &*segmenter : nullptr); });
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file_atomic(o.out, text);
  }
}

std::string join_categories(const std::vector<MoralCategory>& cats) {
  std::string s;
  for (MoralCategory c : cats) {
    if (!s.empty()) s += ',';
    s += name(c);
  }
  return s;
}

int cmd_dict_stats(const Options& o, std::ostream& out) {
  const std::string path = o.dictPath.empty() ? o.dict : o.dictPath;
  require_flag(path, "a dictionary path", "dict stats");
  const Lexicon lex = load_lexicon(path);
  std::ostringstream s;
  s << "category\tcount\n";
  for (const auto& [category, count] : category_counts(lex)) s << name(category) << '\t' << count << '\n';
  s << "total\t" << lex.size() << '\n';
  if (!o.countsOnly) {
    s << "\npattern\tcategories\n";
    for (const LexiconEntry& e : lex.entries()) s << e.pattern.notation() << '\t' << join_categories(e.categories) << '\n';
  }
  emit(o, s.str(), out);
  return kSuccess;
}

int cmd_dict_convert(const Options& o, std::ostream& out) {
  const std::string path = o.dictPath.empty() ? o.dict : o.dictPath;
  require_flag(path, "a dictionary path", "dict convert");
  emit(o, serialize_dic(load_lexicon(path)), out);
  return kSuccess;
}

int cmd_dict_check(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string path = o.dictPath.empty() ? o.dict : o.dictPath;
  require_flag(path, "a dictionary path", "dict check");
  std::vector<Diagnostic> warnings;
  const Lexicon lex = load_lexicon(path, &warnings);
  for (const Diagnostic& d : warnings) {
    err << "warning: " << path;
    if (d.line) err << ':' << *d.line;
    err << ": " << d.message << '\n';
  }
  out << "ok: " << lex.size() << " entries\n";
  return kSuccess;
}

Grouping parse_grouping(const std::string& text) {
  if (text == "per-participant") return Grouping::PerParticipant;
  if (text == "pooled") return Grouping::Pooled;
  throw UsageError("--grouping must be per-participant or pooled");
}

int cmd_score(const Options& o, std::ostream& out) {
  require_flag(o.dict, "--dict", "score");
  require_flag(o.docs, "--docs", "score");
  const std::string metric = o.metric.empty() ? "both" : o.metric;
  if (metric != "both" && metric != "percent" && metric != "ratio") {
    throw UsageError("--metric must be percent, ratio or both");
  }
  const Grouping grouping = parse_grouping(o.grouping);
  const Lexicon lex = load_lexicon(o.dict);
  const auto docs = load_docs(o);
  const CompiledLexicon compiled(lex);
  const DictSizes sizes = dict_sizes(lex);

  std::ostringstream s;
  s << "group\tcontext\tmeasured\traw\ttokens";
  if (metric != "ratio") s << "\tpercent";
  if (metric != "percent") s << "\tratio";
  s << "\tempty\n";
  for (const WordPool& pool : with_path(o.docs, [&] { return build_pools(docs); })) {
    if (pool.documents.empty()) continue;
    for (const RatioRow& row : with_path(o.docs, [&] { return frequency_ratios(pool, compiled, sizes, grouping); })) {
      s << row.group << '\t' << key(row.contextFoundation) << '\t' << key(row.measuredFoundation) << '\t'
        << row.rawCount << '\t' << row.groupTokens;
      if (metric != "ratio") s << '\t' << format_number(row.percent);
      if (metric != "percent") s << '\t' << format_number(row.normalizedRatio);
      s << '\t' << (row.emptyGroup ? "true" : "false") << '\n';
    }
  }
  emit(o, s.str(), out);
  return kSuccess;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  require_flag(o.dict, "--dict", "validate");
  require_flag(o.docs, "--docs", "validate");
  Metric metric = Metric::Ratio;
  if (o.metric == "percent") {
    metric = Metric::Percent;
  } else if (!o.metric.empty() && o.metric != "ratio") {
    throw UsageError("validate: --metric must be ratio or percent");
  }
  const Lexicon lex = load_lexicon(o.dict);
  const auto docs = load_docs(o);
  const CompiledLexicon compiled(lex);
  const auto pools = with_path(o.docs, [&] { return validate_pools(docs, compiled, dict_sizes(lex), metric); });

  int status = kSuccess;
  std::ostringstream s;
  s << "context\tparticipants\tF\tdf1\tdf2\tp";
  for (MoralFoundation f : kFoundations) s << "\tmean_" << key(f);
  s << "\trank\tcontext_first\n";
  for (const PoolValidation& v : pools) {
    s << key(v.context) << '\t' << v.participants << '\t';
    const long n = static_cast<long>(v.participants * kFoundationCount);
    if (v.anova) {
      s << format_number(v.anova->fStatistic) << '\t' << v.anova->dfBetween << '\t' << v.anova->dfWithin << '\t'
        << format_number(v.anova->pValue);
    } else if (v.degenerate) {
      s << "0\t" << kFoundationCount - 1 << '\t' << n - static_cast<long>(kFoundationCount) << "\t1";
    } else {
      s << "nan\tnan\tnan\tnan";
      status = kDataError;
    }
    for (double m : v.means) s << '\t' << format_number(m);
    s << '\t';
    if (v.participants > 0) {
      for (std::size_t i = 0; i < v.rank.size(); ++i) s << (i ? ">" : "") << key(v.rank[i]);
    }
    s << '\t' << (v.contextFirst ? "true" : "false") << '\n';
    if (!v.note.empty()) err << (v.anova || v.degenerate ? "warning: " : "error: ") << key(v.context) << " pool: " << v.note << '\n';
  }
  emit(o, s.str(), out);
  return status;
}

int cmd_correlate(const Options& o, std::ostream& out, std::ostream& err) {
  require_flag(o.dict, "--dict", "correlate");
  require_flag(o.docs, "--docs", "correlate");
  require_flag(o.mfq, "--mfq", "correlate");
  require_file(o.mfq, "--mfq");
  const Lexicon lex = load_lexicon(o.dict);
  const auto docs = load_docs(o);
  const auto mfq = with_path(o.mfq, [&] { return load_mfq(o.mfq); });
  const CompiledLexicon compiled(lex);
  const auto measures = with_path(o.docs, [&] { return participant_measures(docs, compiled); });
  const CorrelationReport report = correlate_measures(measures, mfq);

  const auto list_ids = [&](const std::vector<std::string>& ids, std::string_view where) {
    if (ids.empty()) return;
    err << "note: " << ids.size() << " participant(s) only in " << where << ", excluded:";
    for (const std::string& id : ids) err << ' ' << id;
    err << '\n';
  };
  list_ids(report.onlyInDocs, "--docs");
  list_ids(report.onlyInMfq, "--mfq");

  std::ostringstream s;
  s << "foundation\tmeasure\tr\tn\tp\n";
  for (const CorrelationRow& row : report.rows) {
    if (!row.result) {
      err << "note: skipped " << key(row.foundation) << '/' << key(row.measure) << ": " << row.note << '\n';
      continue;
    }
    if (!row.note.empty()) err << "warning: " << key(row.foundation) << '/' << key(row.measure) << ": " << row.note << '\n';
    s << key(row.foundation) << '\t' << key(row.measure) << '\t' << format_number(row.result->r) << '\t'
      << row.result->n << '\t' << format_number(row.result->pValue) << '\n';
  }
  emit(o, s.str(), out);
  if (report.shared == 0) {
    err << "error: no participant id is shared by --docs and --mfq\n";
    return kDataError;
  }
  return kSuccess;
}

forge::HttpEndpoint endpoint(const std::string& url, const Options& o) {
  forge::HttpEndpoint e;
  e.urlTemplate = url;
  if (!o.cacheDir.empty()) e.cacheDir = fs::path(o.cacheDir);
  return e;
}

int cmd_forge(const Options& o, std::optional<forge::Step> single, std::ostream& out) {
  using forge::Step;
  forge::PipelineOptions options;
  if (single) {
    options.from = options.to = *single;
  } else {
    if (!o.from.empty()) {
      const auto s = forge::parse_step(o.from);
      if (!s) throw UsageError("--from: unknown step '" + o.from + "'");
      options.from = *s;
    }
    if (!o.to.empty()) {
      const auto s = forge::parse_step(o.to);
      if (!s) throw UsageError("--to: unknown step '" + o.to + "'");
      options.to = *s;
    }
  }
  if (!o.workDir.empty()) options.workDir = fs::path(o.workDir);
  if (options.from != Step::Expand && o.workDir.empty()) {
    throw UsageError("forge " + std::string(forge::name(options.from)) + " needs --work-dir holding earlier stages");
  }
  if (o.perStemKeep == 0 || o.perWordKeep == 0) throw UsageError("--per-stem-keep and --per-word-keep must be >= 1");

  for (const auto& [path, flag] : {std::pair{o.source, "--source"}, {o.words, "--words"}, {o.bilingual, "--bilingual"},
                                   {o.reverse, "--reverse"}, {o.exclusions, "--exclusions"},
                                   {o.decisions, "--decisions"}}) {
    require_file(path, flag);
  }
  for (const std::string& f : o.freq) require_file(f, "--freq");
  if (!o.reverse.empty() && o.bilingual.empty()) throw UsageError("--reverse needs --bilingual");
  if (!o.words.empty() && !o.wordsUrl.empty()) throw UsageError("give --words or --words-url, not both");
  const bool http_bilingual = !o.translateUrl.empty() || !o.reverseUrl.empty();
  if (http_bilingual && !o.bilingual.empty()) throw UsageError("give --bilingual or --translate-url, not both");
  if (http_bilingual && (o.translateUrl.empty() || o.reverseUrl.empty())) {
    throw UsageError("--translate-url and --reverse-url go together");
  }

  const auto needs = [&](Step step) { return number(options.from) <= number(step) && number(step) <= number(options.to); };
  const std::string command = single ? "forge " + std::string(forge::name(*single)) : "forge run";
  if (needs(Step::Expand) || needs(Step::BackCheck)) require_flag(o.source, "--source", command);
  if (needs(Step::Expand) && o.words.empty() && o.wordsUrl.empty()) throw UsageError(command + " needs --words");
  if ((needs(Step::Translate) || needs(Step::BackCheck)) && o.bilingual.empty() && !http_bilingual) {
    throw UsageError(command + " needs --bilingual");
  }
  if (needs(Step::Filter) && o.freq.empty()) throw UsageError(command + " needs --freq");

  std::optional<Lexicon> source;
  std::unique_ptr<forge::WordListProvider> words;
  std::unique_ptr<forge::BilingualProvider> bilingual;
  forge::PipelineInputs inputs;
  if (!o.source.empty()) {
    source = load_lexicon(o.source);
    inputs.source = &*source;
  }
  if (!o.words.empty()) {
    words = std::make_unique<forge::FileWordList>(with_path(o.words, [&] { return forge::FileWordList::load(o.words); }));
  } else if (!o.wordsUrl.empty()) {
    words = std::make_unique<forge::HttpWordList>(endpoint(o.wordsUrl, o));
  }
  inputs.words = words.get();
  if (!o.bilingual.empty()) {
    const fs::path reverse(o.reverse);
    bilingual = std::make_unique<forge::FileBilingual>(with_path(o.bilingual, [&] {
      return forge::FileBilingual::load(o.bilingual, o.reverse.empty() ? nullptr : &reverse);
    }));
  } else if (http_bilingual) {
    bilingual = std::make_unique<forge::HttpBilingual>(endpoint(o.translateUrl, o), endpoint(o.reverseUrl, o));
  }
  inputs.bilingual = bilingual.get();
  for (const std::string& f : o.freq) {
    inputs.tables.push_back(with_path(f, [&] { return forge::FrequencyTable::load(f); }));
  }
  if (!o.exclusions.empty()) inputs.exclusions = forge::load_word_list(o.exclusions);
  if (!o.decisions.empty()) inputs.decisions = with_path(o.decisions, [&] { return forge::load_decisions(o.decisions); });
  inputs.limits = {o.perStemKeep, o.perWordKeep};

  forge::PipelineResult result;
  try {
    result = forge::run_pipeline(inputs, options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw UsageError(e.detail());
    throw;
  }
  if (!o.out.empty()) write_file_atomic(o.out, serialize_dic(result.lexicon));

  std::size_t review = 0;
  for (const auto& r : result.ledger) review += r.needsHumanReview ? 1 : 0;
  out << "entries\t" << result.lexicon.size() << '\n';
  out << "ledger_records\t" << result.ledger.size() << '\n';
  out << "needs_review\t" << review << '\n';
  return kSuccess;
}

int cmd_synth(const Options& o, std::ostream& out) {
  require_flag(o.outDir, "--out-dir", "synth");
  SynthConfig config;
  config.participants = o.participants;
  config.seed = o.seed;
  config.correlation = o.correlation;
  if (config.participants == 0) throw UsageError("--participants must be >= 1");
  if (config.correlation < -1.0 || config.correlation > 1.0) throw UsageError("--correlation must lie in [-1, 1]");
  const SynthCorpus corpus = make_synthetic_corpus(config);
  const fs::path dir(o.outDir);
  fs::create_directories(dir);
  write_file_atomic(dir / "lexicon.dic", serialize_dic(corpus.lexicon));
  std::ostringstream docs;
  write_documents(docs, corpus.documents);
  write_file_atomic(dir / "docs.tsv", docs.str());
  std::ostringstream mfq;
  write_mfq(mfq, corpus.mfq);
  write_file_atomic(dir / "mfq.csv", mfq.str());
  out << "wrote " << corpus.documents.size() << " documents for " << corpus.mfq.size() << " participants to "
      << dir.string() << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Moral foundations dictionary toolkit", "mftlex");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--dict", o.dict, "dictionary (.dic)");
  app.add_option("--docs", o.docs, "situations file (TSV)");
  app.add_option("--mfq", o.mfq, "questionnaire scores (CSV)");
  app.add_option("--out", o.out, "write the result here instead of stdout");
  app.add_option("--grouping", o.grouping, "per-participant or pooled")->check(CLI::IsMember({"per-participant", "pooled"}));
  app.add_option("--metric", o.metric, "score: percent|ratio|both; validate: ratio|percent");
  app.add_option("--seed", o.seed, "seed for synthetic data");
  app.add_option("--segment", o.segment, "segment raw text (greedy)");
  app.add_option("--vocab", o.vocab, "vocabulary for --segment greedy");

  auto* dict = app.add_subcommand("dict", "inspect dictionaries")->require_subcommand(1);
  auto* stats = dict->add_subcommand("stats", "category counts and entries");
  stats->add_option("path", o.dictPath);
  stats->add_flag("--counts-only", o.countsOnly, "omit the entry listing");
  auto* convert = dict->add_subcommand("convert", "rewrite in canonical form");
  convert->add_option("path", o.dictPath);
  auto* check = dict->add_subcommand("check", "parse and report problems");
  check->add_option("path", o.dictPath);

  auto* score = app.add_subcommand("score", "frequency ratios per group and pool");
  auto* validate = app.add_subcommand("validate", "per-pool ANOVA over measured foundations");
  auto* correlate = app.add_subcommand("correlate", "questionnaire vs. writing measures");

  auto* forge_cmd = app.add_subcommand("forge", "build a dictionary by translation")->require_subcommand(1);
  forge_cmd->add_option("--source", o.source, "source-language dictionary");
  forge_cmd->add_option("--words", o.words, "source-language word list");
  forge_cmd->add_option("--words-url", o.wordsUrl, "word list service, {q} = prefix");
  forge_cmd->add_option("--bilingual", o.bilingual, "translation pairs (source TAB target)");
  forge_cmd->add_option("--reverse", o.reverse, "reverse pairs (target TAB source)");
  forge_cmd->add_option("--translate-url", o.translateUrl, "translation service, {q} = word");
  forge_cmd->add_option("--reverse-url", o.reverseUrl, "reverse translation service, {q} = word");
  forge_cmd->add_option("--cache-dir", o.cacheDir, "cache for service answers");
  forge_cmd->add_option("--freq", o.freq, "frequency table (word TAB count); repeatable");
  forge_cmd->add_option("--exclusions", o.exclusions, "words to drop after expansion");
  forge_cmd->add_option("--decisions", o.decisions, "category decisions (pattern TAB categories)");
  forge_cmd->add_option("--work-dir", o.workDir, "stage files and ledger");
  forge_cmd->add_option("--per-stem-keep", o.perStemKeep, "candidates kept per stem source");
  forge_cmd->add_option("--per-word-keep", o.perWordKeep, "candidates kept per word source");
  std::vector<std::pair<CLI::App*, forge::Step>> steps;
  for (int n = forge::number(forge::kFirstStep); n <= forge::number(forge::kLastStep); ++n) {
    const auto step = static_cast<forge::Step>(n);
    steps.emplace_back(forge_cmd->add_subcommand(std::string(forge::name(step)), "run step " + std::to_string(n)), step);
  }
  auto* run_all = forge_cmd->add_subcommand("run", "run steps --from .. --to");
  run_all->add_option("--from", o.from, "first step (name or number)");
  run_all->add_option("--to", o.to, "last step (name or number)");

  auto* synth = app.add_subcommand("synth", "write a synthetic study");
  synth->add_option("--participants", o.participants);
  synth->add_option("--correlation", o.correlation);
  synth->add_option("--out-dir", o.outDir);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*stats) return cmd_dict_stats(o, out);
    if (*convert) return cmd_dict_convert(o, out);
    if (*check) return cmd_dict_check(o, out, err);
    if (*score) return cmd_score(o, out);
    if (*validate) return cmd_validate(o, out, err);
    if (*correlate) return cmd_correlate(o, out, err);
    if (*synth) return cmd_synth(o, out);
    if (*run_all) return cmd_forge(o, std::nullopt, out);
    for (const auto& [sub, step] : steps) {
      if (*sub) return cmd_forge(o, step, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Config ? kUsageError : kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace mftlex::cli
