#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>

namespace mftlex {

// Report order is fixed: Harm, Fairness, Ingroup, Authority, Purity.
enum class MoralFoundation : std::uint8_t { Harm, Fairness, Ingroup, Authority, Purity };

inline constexpr std::size_t kFoundationCount = 5;
inline constexpr std::array<MoralFoundation, kFoundationCount> kFoundations{
    MoralFoundation::Harm, MoralFoundation::Fairness, MoralFoundation::Ingroup,
    MoralFoundation::Authority, MoralFoundation::Purity};

enum class Polarity : std::uint8_t { Virtue, Vice };

// One of the eleven dictionary categories: a foundation with a polarity, or
// MoralityGeneral. The index follows the conventional dictionary id order
// (HarmVirtue=0, HarmVice=1, ..., PurityVice=9, MoralityGeneral=10), so the
// standard file id of a category is index()+1.
class MoralCategory {
 public:
  static constexpr std::size_t kCount = 11;

  constexpr MoralCategory(MoralFoundation f, Polarity p)
      : index_(static_cast<std::uint8_t>(static_cast<int>(f) * 2 + static_cast<int>(p))) {}

  static constexpr MoralCategory general() { return MoralCategory(std::uint8_t{10}); }
  static constexpr MoralCategory from_index(std::size_t i) {
    return MoralCategory(static_cast<std::uint8_t>(i));
  }

  constexpr std::size_t index() const { return index_; }
  constexpr bool is_general() const { return index_ == 10; }

  constexpr std::optional<MoralFoundation> foundation() const {
    if (is_general()) return std::nullopt;
    return static_cast<MoralFoundation>(index_ / 2);
  }
  constexpr std::optional<Polarity> polarity() const {
    if (is_general()) return std::nullopt;
    return static_cast<Polarity>(index_ % 2);
  }

  constexpr auto operator<=>(const MoralCategory&) const = default;

 private:
  constexpr explicit MoralCategory(std::uint8_t i) : index_(i) {}
  std::uint8_t index_;
};

std::array<MoralCategory, MoralCategory::kCount> all_categories();

// "HarmVirtue", "PurityVice", "MoralityGeneral".
std::string_view name(MoralCategory c);
// Accepts the canonical names case-insensitively, ignoring spaces, '_' and
// '-' ("Harm Virtue", "harm_virtue"). "Care" is accepted as an alias of Harm.
std::optional<MoralCategory> parse_category(std::string_view text);

// "Harm", "Fairness", ...
std::string_view name(MoralFoundation f);
// "harm", "fairness", ... as used in data files.
std::string_view key(MoralFoundation f);
std::optional<MoralFoundation> parse_foundation(std::string_view text);

std::string_view key(Polarity p);
std::optional<Polarity> parse_polarity(std::string_view text);

constexpr std::size_t index(MoralFoundation f) { return static_cast<std::size_t>(f); }

}  // namespace mftlex
