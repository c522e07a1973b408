#include "mftlex/forge/providers.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "mftlex/error.hpp"
#include "mftlex/lexicon.hpp"
#include "mftlex/text.hpp"

namespace mftlex::forge {

namespace {

// Calls fn(line_no, trimmed_line) for every non-blank, non-comment line.
template <typename Fn>
void for_each_data_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    fn(line_no, line);
  }
}

// A provider word must be usable as an Exact pattern.
std::string checked_word(std::string_view word, std::size_t line_no) {
  try {
    return Pattern(PatternKind::Exact, word).surface();
  } catch (const Error& e) {
    throw Error(e.code(), e.detail(), line_no);
  }
}

FileBilingual::Pairs load_pairs(const std::filesystem::path& path) {
  FileBilingual::Pairs pairs;
  for_each_data_line(path, [&](std::size_t line_no, std::string_view line) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::MalformedRecord, "expected '<word> TAB <translation>' in " + path.string(), line_no);
    }
    pairs.emplace_back(checked_word(trim(line.substr(0, tab)), line_no),
                       checked_word(trim(line.substr(tab + 1)), line_no));
  });
  return pairs;
}

void append_unique(std::vector<std::string>& into, std::string value) {
  if (std::find(into.begin(), into.end(), value) == into.end()) into.push_back(std::move(value));
}

}  // namespace

FileWordList::FileWordList(std::vector<std::string> words) {
  for (const std::string& w : words) {
    std::string normalized = normalize_term(trim(w));
    if (!normalized.empty()) words_.insert(std::move(normalized));
  }
}

FileWordList FileWordList::load(const std::filesystem::path& path) {
  std::vector<std::string> words;
  for_each_data_line(path, [&](std::size_t line_no, std::string_view line) {
    words.push_back(checked_word(line, line_no));
  });
  return FileWordList(std::move(words));
}

std::vector<std::string> FileWordList::words_with_prefix(std::string_view prefix) const {
  const std::string key = normalize_term(prefix);
  std::vector<std::string> out;
  for (auto it = words_.lower_bound(key); it != words_.end() && it->starts_with(key); ++it) out.push_back(*it);
  return out;
}

FileBilingual::FileBilingual(const Pairs& forward, const Pairs* reverse) {
  for (const auto& [source, target] : forward) {
    const std::string s = normalize_term(source);
    const std::string t = normalize_term(target);
    append_unique(forward_[s], t);
    if (!reverse) append_unique(reverse_[t], s);
  }
  if (reverse) {
    for (const auto& [target, source] : *reverse) {
      append_unique(reverse_[normalize_term(target)], normalize_term(source));
    }
  }
}

FileBilingual FileBilingual::load(const std::filesystem::path& forward, const std::filesystem::path* reverse) {
  const Pairs forward_pairs = load_pairs(forward);
  if (!reverse) return FileBilingual(forward_pairs);
  const Pairs reverse_pairs = load_pairs(*reverse);
  return FileBilingual(forward_pairs, &reverse_pairs);
}

std::vector<std::string> FileBilingual::translate(std::string_view source_word) const {
  const auto it = forward_.find(normalize_term(source_word));
  return it == forward_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> FileBilingual::reverse(std::string_view target_word) const {
  const auto it = reverse_.find(normalize_term(target_word));
  return it == reverse_.end() ? std::vector<std::string>{} : it->second;
}

FrequencyTable::FrequencyTable(std::string corpus_name, std::map<std::string, std::uint64_t> counts)
    : name_(std::move(corpus_name)) {
  for (auto& [word, count] : counts) counts_[normalize_term(word)] += count;
}

FrequencyTable FrequencyTable::load(const std::filesystem::path& path) {
  std::map<std::string, std::uint64_t> counts;
  for_each_data_line(path, [&](std::size_t line_no, std::string_view line) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::MalformedRecord, "expected '<word> TAB <count>' in " + path.string(), line_no);
    }
    const std::string_view cell = trim(line.substr(tab + 1));
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), count);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
      throw Error(ErrorCode::MalformedRecord, "bad count '" + std::string(cell) + "'", line_no);
    }
    counts[checked_word(trim(line.substr(0, tab)), line_no)] += count;
  });
  return FrequencyTable(path.stem().string(), std::move(counts));
}

std::uint64_t FrequencyTable::count(std::string_view word) const {
  const auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second;
}

}  // namespace mftlex::forge
