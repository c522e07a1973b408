#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mftlex/category.hpp"
#include "mftlex/error.hpp"

namespace mftlex {

enum class PatternKind : std::uint8_t { Exact, StemPrefix };

// A dictionary surface. The trailing '*' of stem notation is not stored;
// surfaces are normalized (NFC, ASCII lower case) on construction.
class Pattern {
 public:
  // Throws EmptyPattern / InvalidPattern / InvalidUtf8.
  Pattern(PatternKind kind, std::string_view surface);

  // "safe*" -> StemPrefix "safe", "kill" -> Exact "kill".
  static Pattern parse(std::string_view notation);

  PatternKind kind() const { return kind_; }
  bool is_stem() const { return kind_ == PatternKind::StemPrefix; }
  const std::string& surface() const { return surface_; }
  std::string notation() const;

  // `token` must already be normalized.
  bool matches(std::string_view token) const;

  // Orders by surface, then Exact before StemPrefix.
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    if (auto c = a.surface_ <=> b.surface_; c != 0) return c;
    return a.kind_ <=> b.kind_;
  }
  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  PatternKind kind_;
  std::string surface_;
};

struct LexiconEntry {
  Pattern pattern;
  std::vector<MoralCategory> categories;  // non-empty, no duplicates, listing order

  bool has(MoralCategory c) const;
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// File id -> category. Ids and categories are both unique.
using CategoryTable = std::map<int, MoralCategory>;

// The conventional 11-row table: 1 HarmVirtue, 2 HarmVice, ..., 11 MoralityGeneral.
CategoryTable standard_category_table();

// An ordered dictionary. Entries keep insertion order; (kind, surface) is
// unique, and one surface never appears with both kinds.
class Lexicon {
 public:
  explicit Lexicon(std::string name = {}, CategoryTable table = standard_category_table());

  // Adds an entry or unions categories into the existing one with the same
  // pattern. Returns true when an existing entry absorbed the categories.
  // Throws UnknownCategoryId if a category is missing from the table and
  // DuplicatePatternConflict if the surface exists with the other kind.
  bool add(const Pattern& pattern, std::span<const MoralCategory> categories);
  bool add(const LexiconEntry& entry) { return add(entry.pattern, entry.categories); }

  const std::string& name() const { return name_; }
  const CategoryTable& category_table() const { return table_; }
  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const LexiconEntry* find(const Pattern& pattern) const;
  int id_of(MoralCategory c) const;  // throws UnknownCategoryId

  // Structural equality: category table and entries (the name is a label).
  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.table_ == b.table_ && a.entries_ == b.entries_;
  }

 private:
  std::string name_;
  CategoryTable table_;
  std::vector<LexiconEntry> entries_;
  std::map<std::string, std::pair<PatternKind, std::size_t>, std::less<>> by_surface_;
};

// LIWC .dic reader:
//   %
//   <id><TAB><CategoryName>
//   %
//   <pattern>[*]<TAB or spaces><id> [<id> ...]
// Blank lines and lines starting with '#' are skipped; CRLF and a leading
// BOM are tolerated. Duplicate (pattern, id) pairs collapse silently; a
// pattern repeated on another line unions its categories and appends a
// warning to `warnings`.
Lexicon parse_dic(std::istream& in, std::string name = {},
                  std::vector<Diagnostic>* warnings = nullptr);
Lexicon parse_dic(std::string_view text, std::string name = {},
                  std::vector<Diagnostic>* warnings = nullptr);
Lexicon load_dic(const std::filesystem::path& path, std::vector<Diagnostic>* warnings = nullptr);

// Canonical form: '%' sentinels, TAB separators, '*' suffix for stems, LF
// line endings. Only ids present in the table are written.
void serialize_dic(const Lexicon& lexicon, std::ostream& out);
std::string serialize_dic(const Lexicon& lexicon);

// Count of entries carrying each category, for all eleven categories in
// index order. Memberships are counted, so the counts sum to more than the
// entry count when entries carry several categories.
std::vector<std::pair<MoralCategory, std::size_t>> category_counts(const Lexicon& lexicon);

}  // namespace mftlex
