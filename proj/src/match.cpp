#include "mftlex/match.hpp"

#include <algorithm>
#include <functional>

#include "mftlex/text.hpp"

namespace mftlex {

CompiledLexicon::CompiledLexicon(const Lexicon& lexicon) : entries_(lexicon.entries()) {
  nodes_.emplace_back();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    std::uint32_t node = 0;
    for (unsigned char byte : entries_[i].pattern.surface()) {
      auto& children = nodes_[node].children;
      auto it = std::lower_bound(children.begin(), children.end(), byte,
                                 [](const auto& edge, unsigned char b) { return edge.first < b; });
      if (it != children.end() && it->first == byte) {
        node = it->second;
        continue;
      }
      const auto next = static_cast<std::uint32_t>(nodes_.size());
      children.insert(it, {byte, next});
      nodes_.emplace_back();
      node = next;
    }
    // Lexicon guarantees one entry per (kind, surface).
    auto& slot = entries_[i].pattern.is_stem() ? nodes_[node].stem : nodes_[node].exact;
    slot = static_cast<std::int32_t>(i);
  }
}

std::uint32_t CompiledLexicon::child(std::uint32_t node, unsigned char byte) const {
  const auto& children = nodes_[node].children;
  auto it = std::lower_bound(children.begin(), children.end(), byte,
                             [](const auto& edge, unsigned char b) { return edge.first < b; });
  return (it != children.end() && it->first == byte) ? it->second : 0;
}

std::optional<TokenHit> CompiledLexicon::match_normalized(std::string_view token) const {
  if (nodes_.empty()) return std::nullopt;

  // Deeper payloads are longer surfaces, so the last one seen wins.
  std::int32_t best = -1;
  std::uint32_t node = 0;
  bool consumed_all = true;
  for (unsigned char byte : token) {
    if (nodes_[node].stem >= 0) best = nodes_[node].stem;
    node = child(node, byte);
    if (node == 0) {
      consumed_all = false;
      break;
    }
  }
  if (consumed_all) {
    if (nodes_[node].exact >= 0) {
      best = nodes_[node].exact;
    } else if (nodes_[node].stem >= 0) {
      best = nodes_[node].stem;
    }
  }
  if (best < 0) return std::nullopt;

  TokenHit hit{static_cast<std::size_t>(best), {}};
  for (MoralCategory c : entries_[hit.entry].categories) {
    if (std::find(hit.categories.begin(), hit.categories.end(), c) == hit.categories.end()) {
      hit.categories.push_back(c);
    }
  }
  return hit;
}

std::optional<TokenHit> CompiledLexicon::match(std::string_view token) const {
  return match_normalized(normalize_term(token));
}

std::vector<LexiconEntry> CompiledLexicon::recover_entries() const {
  std::vector<LexiconEntry> out;
  if (nodes_.empty()) return out;
  std::string path;
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t node) {
    for (std::int32_t payload : {nodes_[node].exact, nodes_[node].stem}) {
      if (payload < 0) continue;
      const LexiconEntry& source = entries_[static_cast<std::size_t>(payload)];
      const PatternKind kind = payload == nodes_[node].exact ? PatternKind::Exact : PatternKind::StemPrefix;
      out.push_back({Pattern(kind, path), source.categories});
    }
    for (const auto& [byte, next] : nodes_[node].children) {
      path.push_back(static_cast<char>(byte));
      walk(next);
      path.pop_back();
    }
  };
  walk(0);
  return out;
}

CompiledLexicon compile(const Lexicon& lexicon) { return CompiledLexicon(lexicon); }

std::optional<TokenHit> match_token(const CompiledLexicon& compiled, std::string_view token) {
  return compiled.match(token);
}

MatchReport match_document(const CompiledLexicon& compiled, const TokenDocument& doc) {
  MatchReport report;
  report.docId = doc.docId;
  report.tokenCount = doc.tokens.size();
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    auto hit = compiled.match(doc.tokens[i]);
    if (!hit) continue;

    std::array<bool, kFoundationCount> foundation_seen{};
    for (MoralCategory c : hit->categories) {
      ++report.perCategoryCount[c.index()];
      if (const auto f = c.foundation(); f && !foundation_seen[index(*f)]) {
        foundation_seen[index(*f)] = true;
        ++report.perFoundationCount[index(*f)];
      }
    }
    report.hits.push_back({i, hit->entry, std::move(hit->categories)});
  }
  return report;
}

}  // namespace mftlex
