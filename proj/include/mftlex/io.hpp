#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mftlex/category.hpp"
#include "mftlex/match.hpp"

namespace mftlex {

// Greedy longest-match segmentation against a vocabulary. Text with no
// vocabulary word at a position yields a one-code-point token there. Blanks
// always separate tokens.
class GreedySegmenter {
 public:
  explicit GreedySegmenter(std::vector<std::string> vocabulary);
  static GreedySegmenter from_file(const std::filesystem::path& path);

  std::vector<std::string> segment(std::string_view text) const;

 private:
  std::unordered_set<std::string> vocabulary_;
  std::size_t max_code_points_ = 0;
};

// Document file: one situation per line,
//   <participantId> TAB <foundation> TAB <polarity> TAB <space-separated tokens>
// Blank and '#' lines are skipped. Documents get ids "<participant>#<record>".
// Throws MissingContext / MalformedRecord with the record's line number.
std::vector<TokenDocument> read_documents(std::istream& in,
                                          const GreedySegmenter* segmenter = nullptr);
std::vector<TokenDocument> load_documents(const std::filesystem::path& path,
                                          const GreedySegmenter* segmenter = nullptr);
void write_documents(std::ostream& out, const std::vector<TokenDocument>& docs);

struct MfqRow {
  std::string participantId;
  std::array<int, kFoundationCount> scores{};
};

struct MfqRange {
  int min = 0;
  int max = 30;
};

// CSV with a header row: participantId,harm,fairness,ingroup,authority,purity
std::vector<MfqRow> read_mfq(std::istream& in, MfqRange range = {});
std::vector<MfqRow> load_mfq(const std::filesystem::path& path, MfqRange range = {});
void write_mfq(std::ostream& out, const std::vector<MfqRow>& rows);

// Six significant digits, fixed across platforms for byte-stable tables.
std::string format_number(double value);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mftlex
