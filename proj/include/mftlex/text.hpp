#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mftlex {

bool is_valid_utf8(std::string_view s);

// NFC normalization followed by ASCII case folding. Non-Latin scripts have no
// ASCII letters and pass through the fold untouched. Throws
// Error(InvalidUtf8) on malformed input.
std::string normalize_term(std::string_view s);

std::size_t code_point_count(std::string_view s);

// Code points of `s` as separate UTF-8 strings.
std::vector<std::string> code_points(std::string_view s);

// Byte length of the first `n` code points of `s` (or s.size()).
std::size_t code_point_prefix_bytes(std::string_view s, std::size_t n);

// Unicode White_Space anywhere in `s` (ASCII blanks, U+3000, NBSP, ...).
bool contains_whitespace(std::string_view s);

// Splits on runs of Unicode White_Space (ASCII blanks, U+3000, ...).
std::vector<std::string> split_whitespace(std::string_view s);

// Splits on runs of ASCII space and tab.
std::vector<std::string> split_blanks(std::string_view s);

std::string_view trim(std::string_view s);

std::string ascii_lower(std::string_view s);

}  // namespace mftlex
