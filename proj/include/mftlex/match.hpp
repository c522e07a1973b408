#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mftlex/category.hpp"
#include "mftlex/lexicon.hpp"

namespace mftlex {

struct TokenHit {
  std::size_t entry;                      // index into CompiledLexicon::entries()
  std::vector<MoralCategory> categories;  // deduplicated
};

// Byte trie over normalized pattern surfaces. Each node may terminate one
// Exact and one StemPrefix pattern. Immutable after construction.
class CompiledLexicon {
 public:
  CompiledLexicon() = default;
  explicit CompiledLexicon(const Lexicon& lexicon);

  // Winner among all matching entries: the longest surface; Exact beats
  // StemPrefix at equal length. The token is normalized first.
  std::optional<TokenHit> match(std::string_view token) const;
  // Same, for a token that is already normalized.
  std::optional<TokenHit> match_normalized(std::string_view token) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const LexiconEntry& entry(std::size_t i) const { return entries_[i]; }

  // Rebuilds the entry list by walking the trie (sorted by pattern).
  std::vector<LexiconEntry> recover_entries() const;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::uint32_t>> children;  // sorted by byte
    std::int32_t exact = -1;
    std::int32_t stem = -1;
  };

  std::uint32_t child(std::uint32_t node, unsigned char byte) const;  // 0 when absent

  std::vector<Node> nodes_;
  std::vector<LexiconEntry> entries_;
};

CompiledLexicon compile(const Lexicon& lexicon);
std::optional<TokenHit> match_token(const CompiledLexicon& compiled, std::string_view token);

enum class ContextPolarity : std::uint8_t { Virtue, Vice, Combined };

// One listed situation, already segmented into tokens.
struct TokenDocument {
  std::string docId;
  std::optional<std::string> participantId;
  std::optional<MoralFoundation> contextFoundation;
  std::optional<ContextPolarity> contextPolarity;
  std::vector<std::string> tokens;
};

struct DocumentHit {
  std::size_t tokenIndex;
  std::size_t entry;
  std::vector<MoralCategory> categories;
};

struct MatchReport {
  std::string docId;
  std::size_t tokenCount = 0;
  std::vector<DocumentHit> hits;
  // A token adds at most one to any category and at most one to any
  // foundation (Virtue and Vice combined). MoralityGeneral has no foundation.
  std::array<std::size_t, MoralCategory::kCount> perCategoryCount{};
  std::array<std::size_t, kFoundationCount> perFoundationCount{};

  std::size_t count(MoralCategory c) const { return perCategoryCount[c.index()]; }
  std::size_t count(MoralFoundation f) const { return perFoundationCount[index(f)]; }
};

MatchReport match_document(const CompiledLexicon& compiled, const TokenDocument& doc);

}  // namespace mftlex
