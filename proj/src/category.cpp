#include "mftlex/category.hpp"

#include <string>
#include <utility>

#include "mftlex/text.hpp"

namespace mftlex {

namespace {

constexpr std::array<std::string_view, MoralCategory::kCount> kCategoryNames{
    "HarmVirtue",      "HarmVice",      "FairnessVirtue", "FairnessVice",
    "IngroupVirtue",   "IngroupVice",   "AuthorityVirtue", "AuthorityVice",
    "PurityVirtue",    "PurityVice",    "MoralityGeneral"};

constexpr std::array<std::string_view, kFoundationCount> kFoundationNames{
    "Harm", "Fairness", "Ingroup", "Authority", "Purity"};

constexpr std::array<std::string_view, kFoundationCount> kFoundationKeys{
    "harm", "fairness", "ingroup", "authority", "purity"};

// Lower case with spaces, '_' and '-' removed.
std::string squash(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '-' || c == '\t') continue;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

}  // namespace

std::array<MoralCategory, MoralCategory::kCount> all_categories() {
  return []<std::size_t... I>(std::index_sequence<I...>) {
    return std::array<MoralCategory, MoralCategory::kCount>{MoralCategory::from_index(I)...};
  }(std::make_index_sequence<MoralCategory::kCount>{});
}

std::string_view name(MoralCategory c) { return kCategoryNames[c.index()]; }

std::optional<MoralCategory> parse_category(std::string_view text) {
  std::string s = squash(text);
  if (s.starts_with("care")) s = "harm" + s.substr(4);
  if (s == "moralgeneral" || s == "general") s = "moralitygeneral";
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (s == squash(kCategoryNames[i])) return MoralCategory::from_index(i);
  }
  return std::nullopt;
}

std::string_view name(MoralFoundation f) { return kFoundationNames[index(f)]; }
std::string_view key(MoralFoundation f) { return kFoundationKeys[index(f)]; }

std::optional<MoralFoundation> parse_foundation(std::string_view text) {
  std::string s = squash(text);
  if (s == "care") s = "harm";
  for (std::size_t i = 0; i < kFoundationKeys.size(); ++i) {
    if (s == kFoundationKeys[i]) return kFoundations[i];
  }
  return std::nullopt;
}

std::string_view key(Polarity p) { return p == Polarity::Virtue ? "virtue" : "vice"; }

std::optional<Polarity> parse_polarity(std::string_view text) {
  const std::string s = squash(text);
  if (s == "virtue") return Polarity::Virtue;
  if (s == "vice") return Polarity::Vice;
  return std::nullopt;
}

}  // namespace mftlex
