#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mftlex::forge {

// Source-language word list: every known word beginning with a stem.
// Implementations return normalized, duplicate-free words that all start
// with the queried prefix, and throw Error(ProviderFailure) when the
// resource cannot answer.
class WordListProvider {
 public:
  virtual ~WordListProvider() = default;
  virtual std::vector<std::string> words_with_prefix(std::string_view prefix) const = 0;
};

// Bilingual dictionary. translate() goes source -> target, reverse() goes
// target -> source and backs the back-translation check.
class BilingualProvider {
 public:
  virtual ~BilingualProvider() = default;
  virtual std::vector<std::string> translate(std::string_view source_word) const = 0;
  virtual std::vector<std::string> reverse(std::string_view target_word) const = 0;
};

// One word per line (UTF-8). Blank and '#' lines are ignored.
class FileWordList : public WordListProvider {
 public:
  explicit FileWordList(std::vector<std::string> words);
  static FileWordList load(const std::filesystem::path& path);

  std::vector<std::string> words_with_prefix(std::string_view prefix) const override;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

// `<source> TAB <target>` pairs. Candidate order follows the file. When a
// separate reverse table (`<target> TAB <source>`) is supplied it answers
// reverse(); otherwise the forward pairs are inverted.
class FileBilingual : public BilingualProvider {
 public:
  using Pairs = std::vector<std::pair<std::string, std::string>>;

  explicit FileBilingual(const Pairs& forward, const Pairs* reverse = nullptr);
  static FileBilingual load(const std::filesystem::path& forward,
                            const std::filesystem::path* reverse = nullptr);

  std::vector<std::string> translate(std::string_view source_word) const override;
  std::vector<std::string> reverse(std::string_view target_word) const override;

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> forward_;
  std::map<std::string, std::vector<std::string>, std::less<>> reverse_;
};

// Corpus word counts. Words absent from the table count 0.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  FrequencyTable(std::string corpus_name, std::map<std::string, std::uint64_t> counts);
  // `<word> TAB <count>` lines; the corpus name defaults to the file stem.
  static FrequencyTable load(const std::filesystem::path& path);

  const std::string& corpus_name() const { return name_; }
  std::uint64_t count(std::string_view word) const;
  bool contains(std::string_view word) const { return count(word) > 0; }

 private:
  std::string name_;
  std::map<std::string, std::uint64_t, std::less<>> counts_;
};

}  // namespace mftlex::forge
