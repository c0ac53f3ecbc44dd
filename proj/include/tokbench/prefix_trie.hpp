#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tokbench {

/// Code-point trie with common-prefix search. Edges live in one hash map
/// keyed by (node, code point), which keeps large sparse alphabets compact.
template <typename Value>
class PrefixTrie {
 public:
  PrefixTrie() : values_(1) {}

  /// Returns false (and leaves the trie unchanged) if the key already exists.
  bool insert(std::u32string_view key, Value value) {
    std::uint64_t node = 0;
    for (char32_t cp : key) {
      const auto [it, inserted] = edges_.try_emplace(edge_key(node, cp), values_.size());
      if (inserted) values_.emplace_back();
      node = it->second;
    }
    if (values_[node]) return false;
    values_[node] = std::move(value);
    ++size_;
    max_depth_ = std::max(max_depth_, key.size());
    return true;
  }

  const Value* find(std::u32string_view key) const {
    std::uint64_t node = 0;
    for (char32_t cp : key) {
      const auto it = edges_.find(edge_key(node, cp));
      if (it == edges_.end()) return nullptr;
      node = it->second;
    }
    return values_[node] ? &*values_[node] : nullptr;
  }

  /// Calls visit(length, value) for every key that is a prefix of
  /// text.substr(start), shortest first.
  template <typename Visit>
  void common_prefix(std::u32string_view text, std::size_t start, Visit&& visit) const {
    std::uint64_t node = 0;
    for (std::size_t i = start; i < text.size(); ++i) {
      const auto it = edges_.find(edge_key(node, text[i]));
      if (it == edges_.end()) return;
      node = it->second;
      if (values_[node]) visit(i - start + 1, *values_[node]);
    }
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t max_depth() const noexcept { return max_depth_; }

 private:
  static std::uint64_t edge_key(std::uint64_t node, char32_t cp) {
    return (node << 21) | static_cast<std::uint64_t>(cp);
  }

  std::unordered_map<std::uint64_t, std::uint64_t> edges_;
  std::vector<std::optional<Value>> values_;
  std::size_t size_ = 0;
  std::size_t max_depth_ = 0;
};

}  // namespace tokbench
