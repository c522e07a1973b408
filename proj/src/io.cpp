#include "mftlex/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "mftlex/error.hpp"
#include "mftlex/text.hpp"

namespace mftlex {

namespace {

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string_view key(ContextPolarity p) {
  switch (p) {
    case ContextPolarity::Virtue: return "virtue";
    case ContextPolarity::Vice: return "vice";
    case ContextPolarity::Combined: return "combined";
  }
  return "combined";
}

}  // namespace

GreedySegmenter::GreedySegmenter(std::vector<std::string> vocabulary) {
  for (const std::string& word : vocabulary) {
    const std::string normalized = normalize_term(trim(word));
    if (normalized.empty()) continue;
    max_code_points_ = std::max(max_code_points_, code_point_count(normalized));
    vocabulary_.insert(normalized);
  }
}

GreedySegmenter GreedySegmenter::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open vocabulary '" + path.string() + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view word = trim(line);
    if (!word.empty() && word.front() != '#') words.emplace_back(word);
  }
  return GreedySegmenter(std::move(words));
}

std::vector<std::string> GreedySegmenter::segment(std::string_view text) const {
  std::vector<std::string> tokens;
  for (const std::string& chunk : split_whitespace(text)) {
    const std::vector<std::string> chars = code_points(normalize_term(chunk));
    std::size_t i = 0;
    while (i < chars.size()) {
      std::size_t taken = 1;
      std::string best = chars[i];
      std::string candidate;
      const std::size_t limit = std::min(max_code_points_, chars.size() - i);
      for (std::size_t len = 1; len <= limit; ++len) {
        candidate += chars[i + len - 1];
        if (vocabulary_.contains(candidate)) {
          best = candidate;
          taken = len;
        }
      }
      tokens.push_back(std::move(best));
      i += taken;
    }
  }
  return tokens;
}

std::vector<TokenDocument> read_documents(std::istream& in, const GreedySegmenter* segmenter) {
  std::vector<TokenDocument> docs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (trim(line).empty() || trim(line).front() == '#') continue;

    const std::vector<std::string_view> fields = split_on(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      throw Error(ErrorCode::MalformedRecord,
                  "expected <participant> TAB <foundation> TAB <polarity> TAB <tokens>", line_no);
    }
    TokenDocument doc;
    const std::string_view participant = trim(fields[0]);
    if (participant.empty()) throw Error(ErrorCode::MissingParticipant, "record has no participant id", line_no);
    doc.participantId = std::string(participant);
    doc.docId = std::string(participant) + "#" + std::to_string(line_no);

    const std::string_view foundation = trim(fields[1]);
    if (foundation.empty()) throw Error(ErrorCode::MissingContext, "record has no foundation context", line_no);
    doc.contextFoundation = parse_foundation(foundation);
    if (!doc.contextFoundation) {
      throw Error(ErrorCode::MalformedRecord, "unknown foundation '" + std::string(foundation) + "'", line_no);
    }

    const std::string_view polarity = trim(fields[2]);
    if (polarity.empty() || ascii_lower(polarity) == "combined") {
      doc.contextPolarity = ContextPolarity::Combined;
    } else if (const auto p = parse_polarity(polarity)) {
      doc.contextPolarity = *p == Polarity::Virtue ? ContextPolarity::Virtue : ContextPolarity::Vice;
    } else {
      throw Error(ErrorCode::MalformedRecord, "unknown polarity '" + std::string(polarity) + "'", line_no);
    }

    if (fields.size() == 4) {
      try {
        doc.tokens = segmenter ? segmenter->segment(fields[3]) : split_whitespace(fields[3]);
      } catch (const Error& e) {
        throw Error(e.code(), e.detail(), line_no);
      }
      if (!segmenter && !is_valid_utf8(fields[3])) {
        throw Error(ErrorCode::InvalidUtf8, "tokens are not valid UTF-8", line_no);
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<TokenDocument> load_documents(const std::filesystem::path& path, const GreedySegmenter* segmenter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open documents '" + path.string() + "'");
  return read_documents(in, segmenter);
}

void write_documents(std::ostream& out, const std::vector<TokenDocument>& docs) {
  for (const TokenDocument& doc : docs) {
    out << doc.participantId.value_or("") << '\t'
        << (doc.contextFoundation ? key(*doc.contextFoundation) : std::string_view{}) << '\t'
        << key(doc.contextPolarity.value_or(ContextPolarity::Combined)) << '\t';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) out << (i ? " " : "") << doc.tokens[i];
    out << '\n';
  }
}

std::vector<MfqRow> read_mfq(std::istream& in, MfqRange range) {
  std::vector<MfqRow> rows;
  std::array<std::size_t, kFoundationCount> columns{};
  std::size_t id_column = 0;
  std::size_t width = 0;
  bool have_header = false;
  std::set<std::string> seen;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const std::vector<std::string_view> fields = split_on(line, ',');

    if (!have_header) {
      std::array<bool, kFoundationCount> found{};
      bool found_id = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = ascii_lower(trim(fields[i]));
        if (name == "participantid" || name == "participant_id" || name == "participant" || name == "id") {
          id_column = i;
          found_id = true;
        } else if (const auto f = parse_foundation(name)) {
          columns[index(*f)] = i;
          found[index(*f)] = true;
        }
      }
      for (MoralFoundation f : kFoundations) {
        if (!found[index(f)]) {
          throw Error(ErrorCode::MalformedRecord, "MFQ header lacks a '" + std::string(key(f)) + "' column", line_no);
        }
      }
      if (!found_id) throw Error(ErrorCode::MalformedRecord, "MFQ header lacks a participantId column", line_no);
      width = fields.size();
      have_header = true;
      continue;
    }

    if (fields.size() != width) {
      throw Error(ErrorCode::MalformedRecord,
                  "expected " + std::to_string(width) + " columns, found " + std::to_string(fields.size()), line_no);
    }
    MfqRow row;
    row.participantId = std::string(trim(fields[id_column]));
    if (row.participantId.empty()) throw Error(ErrorCode::MissingParticipant, "row has no participant id", line_no);
    if (!seen.insert(row.participantId).second) {
      throw Error(ErrorCode::MalformedRecord, "participant '" + row.participantId + "' listed twice", line_no);
    }
    for (MoralFoundation f : kFoundations) {
      const std::string_view cell = trim(fields[columns[index(f)]]);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw Error(ErrorCode::MalformedRecord, "bad " + std::string(key(f)) + " score '" + std::string(cell) + "'", line_no);
      }
      if (value < range.min || value > range.max) {
        throw Error(ErrorCode::MalformedRecord,
                    std::string(key(f)) + " score " + std::to_string(value) + " outside [" +
                        std::to_string(range.min) + ", " + std::to_string(range.max) + "]",
                    line_no);
      }
      row.scores[index(f)] = value;
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::MalformedRecord, "MFQ file has no header row");
  return rows;
}

std::vector<MfqRow> load_mfq(const std::filesystem::path& path, MfqRange range) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open MFQ scores '" + path.string() + "'");
  return read_mfq(in, range);
}

void write_mfq(std::ostream& out, const std::vector<MfqRow>& rows) {
  out << "participantId";
  for (MoralFoundation f : kFoundations) out << ',' << key(f);
  out << '\n';
  for (const MfqRow& row : rows) {
    out << row.participantId;
    for (int score : row.scores) out << ',' << score;
    out << '\n';
  }
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path temp = path;
  temp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + temp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to '" + temp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp);
    throw Error(ErrorCode::Io, "cannot replace '" + path.string() + "': " + ec.message());
  }
}

}  // namespace mftlex
