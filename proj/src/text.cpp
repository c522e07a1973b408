#include "mftlex/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "mftlex/error.hpp"

namespace mftlex {

namespace {

// Calls fn(code_point, byte_offset, byte_length); returns false on a
// malformed sequence.
template <typename Fn>
bool for_each_code_point(std::string_view s, Fn&& fn) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto length = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) return false;
    fn(c, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
  }
  return true;
}

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  return for_each_code_point(s, [](UChar32, std::size_t, std::size_t) {});
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string normalize_term(std::string_view s) {
  if (is_ascii(s)) return ascii_lower(s);
  if (!is_valid_utf8(s)) throw Error(ErrorCode::InvalidUtf8, "malformed UTF-8 in '" + std::string(s) + "'");

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::Io, "ICU NFC normalizer unavailable");

  const icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<std::int32_t>(s.size())));
  std::string out;
  if (nfc->isNormalized(source, status) && U_SUCCESS(status)) {
    out.assign(s);
  } else {
    status = U_ZERO_ERROR;
    const icu::UnicodeString normalized = nfc->normalize(source, status);
    if (U_FAILURE(status)) throw Error(ErrorCode::InvalidUtf8, "cannot normalize '" + std::string(s) + "'");
    normalized.toUTF8String(out);
  }
  return ascii_lower(out);
}

std::size_t code_point_count(std::string_view s) {
  std::size_t n = 0;
  for_each_code_point(s, [&](UChar32, std::size_t, std::size_t) { ++n; });
  return n;
}

std::size_t code_point_prefix_bytes(std::string_view s, std::size_t n) {
  std::size_t seen = 0;
  std::size_t end = s.size();
  for_each_code_point(s, [&](UChar32, std::size_t offset, std::size_t) {
    if (seen == n && end == s.size()) end = offset;
    ++seen;
  });
  return seen <= n ? s.size() : end;
}

bool contains_whitespace(std::string_view s) {
  bool found = false;
  for_each_code_point(s, [&](UChar32 c, std::size_t, std::size_t) {
    if (u_isUWhiteSpace(c)) found = true;
  });
  return found;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  for_each_code_point(s, [&](UChar32 c, std::size_t offset, std::size_t length) {
    if (u_isUWhiteSpace(c)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.append(s.substr(offset, length));
    }
  });
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> code_points(std::string_view s) {
  std::vector<std::string> out;
  for_each_code_point(s, [&](UChar32, std::size_t offset, std::size_t length) {
    out.emplace_back(s.substr(offset, length));
  });
  return out;
}

std::vector<std::string> split_blanks(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace mftlex
