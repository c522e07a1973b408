#include "mftlex/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "mftlex/text.hpp"

namespace mftlex {

Pattern::Pattern(PatternKind kind, std::string_view surface) : kind_(kind) {
  if (surface.empty()) throw Error(ErrorCode::EmptyPattern, "empty pattern");
  surface_ = normalize_term(surface);
  if (surface_.find('*') != std::string::npos) {
    throw Error(ErrorCode::InvalidPattern, "'*' inside pattern '" + std::string(surface) + "'");
  }
  if (contains_whitespace(surface_)) {
    throw Error(ErrorCode::InvalidPattern, "whitespace inside pattern '" + std::string(surface) + "'");
  }
}

Pattern Pattern::parse(std::string_view notation) {
  if (!notation.empty() && notation.back() == '*') {
    notation.remove_suffix(1);
    return Pattern(PatternKind::StemPrefix, notation);
  }
  return Pattern(PatternKind::Exact, notation);
}

std::string Pattern::notation() const { return is_stem() ? surface_ + "*" : surface_; }

bool Pattern::matches(std::string_view token) const {
  return is_stem() ? token.starts_with(surface_) : token == surface_;
}

bool LexiconEntry::has(MoralCategory c) const {
  return std::find(categories.begin(), categories.end(), c) != categories.end();
}

CategoryTable standard_category_table() {
  CategoryTable table;
  for (MoralCategory c : all_categories()) table.emplace(static_cast<int>(c.index()) + 1, c);
  return table;
}

Lexicon::Lexicon(std::string name, CategoryTable table)
    : name_(std::move(name)), table_(std::move(table)) {}

int Lexicon::id_of(MoralCategory c) const {
  for (const auto& [id, category] : table_) {
    if (category == c) return id;
  }
  throw Error(ErrorCode::UnknownCategoryId,
              "category " + std::string(mftlex::name(c)) + " is not in the category table");
}

const LexiconEntry* Lexicon::find(const Pattern& pattern) const {
  const auto it = by_surface_.find(pattern.surface());
  if (it == by_surface_.end() || it->second.first != pattern.kind()) return nullptr;
  return &entries_[it->second.second];
}

bool Lexicon::add(const Pattern& pattern, std::span<const MoralCategory> categories) {
  if (categories.empty()) {
    throw Error(ErrorCode::MalformedEntry, "entry '" + pattern.notation() + "' has no categories");
  }
  for (MoralCategory c : categories) id_of(c);

  const auto append_unique = [](std::vector<MoralCategory>& into, std::span<const MoralCategory> from) {
    for (MoralCategory c : from) {
      if (std::find(into.begin(), into.end(), c) == into.end()) into.push_back(c);
    }
  };

  if (const auto it = by_surface_.find(pattern.surface()); it != by_surface_.end()) {
    const auto [kind, position] = it->second;
    if (kind != pattern.kind()) {
      throw Error(ErrorCode::DuplicatePatternConflict,
                  "'" + pattern.surface() + "' appears both as a word and as a stem");
    }
    append_unique(entries_[position].categories, categories);
    return true;
  }

  LexiconEntry entry{pattern, {}};
  append_unique(entry.categories, categories);
  by_surface_.emplace(pattern.surface(), std::make_pair(pattern.kind(), entries_.size()));
  entries_.push_back(std::move(entry));
  return false;
}

namespace {

std::optional<int> parse_id(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

enum class Section { BeforeHeader, Header, Entries };

}  // namespace

Lexicon parse_dic(std::istream& in, std::string name, std::vector<Diagnostic>* warnings) {
  CategoryTable table;
  std::vector<std::pair<std::size_t, std::string>> entry_lines;
  Section section = Section::BeforeHeader;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    switch (section) {
      case Section::BeforeHeader:
        if (line != "%") throw Error(ErrorCode::MalformedHeader, "expected '%' to open the category header", line_no);
        section = Section::Header;
        break;
      case Section::Header: {
        if (line == "%") {
          section = Section::Entries;
          break;
        }
        const std::size_t split = line.find_first_of(" \t");
        if (split == std::string_view::npos) {
          throw Error(ErrorCode::MalformedHeader, "header line needs '<id><TAB><category>'", line_no);
        }
        const auto id = parse_id(line.substr(0, split));
        if (!id) throw Error(ErrorCode::MalformedHeader, "bad category id '" + std::string(line.substr(0, split)) + "'", line_no);
        const std::string_view category_name = trim(line.substr(split));
        const auto category = parse_category(category_name);
        if (!category) {
          throw Error(ErrorCode::MalformedHeader, "unknown category name '" + std::string(category_name) + "'", line_no);
        }
        if (table.contains(*id)) {
          throw Error(ErrorCode::MalformedHeader, "category id " + std::to_string(*id) + " declared twice", line_no);
        }
        for (const auto& [other_id, other] : table) {
          if (other == *category) {
            throw Error(ErrorCode::MalformedHeader,
                        std::string(mftlex::name(*category)) + " declared under ids " +
                            std::to_string(other_id) + " and " + std::to_string(*id),
                        line_no);
          }
        }
        table.emplace(*id, *category);
        break;
      }
      case Section::Entries:
        entry_lines.emplace_back(line_no, std::string(line));
        break;
    }
  }
  if (section != Section::Entries) {
    throw Error(ErrorCode::MalformedHeader,
                section == Section::BeforeHeader ? "missing '%' header block" : "missing closing '%' after the header");
  }

  Lexicon lexicon(std::move(name), table);
  for (const auto& [entry_line, text] : entry_lines) {
    const std::vector<std::string> fields = split_blanks(text);
    std::optional<Pattern> pattern;
    try {
      pattern = Pattern::parse(fields.front());
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), entry_line);
    }
    if (fields.size() < 2) {
      throw Error(ErrorCode::MalformedEntry, "entry '" + fields.front() + "' lists no category ids", entry_line);
    }
    std::vector<MoralCategory> categories;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto id = parse_id(fields[i]);
      if (!id) throw Error(ErrorCode::MalformedEntry, "bad category id '" + fields[i] + "'", entry_line);
      const auto it = table.find(*id);
      if (it == table.end()) {
        throw Error(ErrorCode::UnknownCategoryId, "category id " + fields[i] + " is not declared in the header", entry_line);
      }
      categories.push_back(it->second);
    }
    bool merged = false;
    try {
      merged = lexicon.add(*pattern, categories);
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), entry_line);
    }
    if (merged && warnings) {
      warnings->push_back({entry_line, "pattern '" + pattern->notation() + "' repeated; categories merged"});
    }
  }
  return lexicon;
}

Lexicon parse_dic(std::string_view text, std::string name, std::vector<Diagnostic>* warnings) {
  std::istringstream in{std::string(text)};
  return parse_dic(in, std::move(name), warnings);
}

Lexicon load_dic(const std::filesystem::path& path, std::vector<Diagnostic>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open dictionary '" + path.string() + "'");
  return parse_dic(in, path.stem().string(), warnings);
}

void serialize_dic(const Lexicon& lexicon, std::ostream& out) {
  out << "%\n";
  for (const auto& [id, category] : lexicon.category_table()) out << id << '\t' << name(category) << '\n';
  out << "%\n";
  for (const LexiconEntry& entry : lexicon.entries()) {
    out << entry.pattern.notation();
    for (MoralCategory c : entry.categories) out << '\t' << lexicon.id_of(c);
    out << '\n';
  }
}

std::string serialize_dic(const Lexicon& lexicon) {
  std::ostringstream out;
  serialize_dic(lexicon, out);
  return out.str();
}

std::vector<std::pair<MoralCategory, std::size_t>> category_counts(const Lexicon& lexicon) {
  std::vector<std::pair<MoralCategory, std::size_t>> counts;
  for (MoralCategory c : all_categories()) counts.emplace_back(c, 0);
  for (const LexiconEntry& entry : lexicon.entries()) {
    for (MoralCategory c : entry.categories) ++counts[c.index()].second;
  }
  return counts;
}

}  // namespace mftlex
