#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/prefix_trie.hpp"
#include "tokbench/text_io.hpp"
#include "tokbench/utf8.hpp"

// Dictionary-driven word segmentation: every dictionary match over the input
// becomes a lattice node and the minimum-cost BOS->EOS path is decoded.
namespace tokbench {

struct DictionaryEntry {
  std::string surface;
  std::int32_t cost = 0;
};

class LexDictionary {
 public:
  static constexpr std::int32_t kDefaultUnknownCost = 10000;

  /// Throws duplicate_entry if the surface is already present.
  void add(DictionaryEntry entry) {
    if (entry.surface.empty()) fail(ErrorKind::parse, "dictionary surface must be non-empty");
    const std::u32string key = utf8::decode(entry.surface);
    if (!trie_.insert(key, static_cast<std::uint32_t>(entries_.size()))) {
      fail(ErrorKind::duplicate_entry, "duplicate dictionary surface '" + entry.surface + "'");
    }
    entries_.push_back(std::move(entry));
  }

  const std::vector<DictionaryEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::int32_t unknown_char_cost() const noexcept { return unknown_cost_; }
  void set_unknown_char_cost(std::int32_t cost) noexcept { unknown_cost_ = cost; }

  /// visit(length_in_chars, entry_index) for every entry starting at `start`.
  template <typename Visit>
  void common_prefix(std::u32string_view text, std::size_t start, Visit&& visit) const {
    trie_.common_prefix(text, start, visit);
  }

  const DictionaryEntry* find(std::string_view surface) const {
    const auto* idx = trie_.find(utf8::decode(surface));
    return idx ? &entries_[*idx] : nullptr;
  }

 private:
  std::vector<DictionaryEntry> entries_;
  PrefixTrie<std::uint32_t> trie_;
  std::int32_t unknown_cost_ = kDefaultUnknownCost;
};

/// Reads the dictionary TSV: `surface<TAB>cost` per line, `#` comments and
/// blank lines skipped, `__UNKNOWN__<TAB>cost` sets the unknown-character
/// cost.
inline LexDictionary load_dictionary(std::string_view tsv) {
  utf8::require_valid(tsv, "dictionary");
  LexDictionary dict;
  std::size_t lineno = 0;
  for (std::string_view line : text::lines(tsv)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    const std::string where = "dictionary line " + std::to_string(lineno);
    if (cols.size() != 2) fail(ErrorKind::parse, where + ": expected 2 tab-separated columns");
    const auto cost = text::parse_int(cols[1]);
    if (!cost || *cost < std::numeric_limits<std::int32_t>::min() ||
        *cost > std::numeric_limits<std::int32_t>::max()) {
      fail(ErrorKind::parse, where + ": cost is not a 32-bit integer: '" + std::string(cols[1]) + "'");
    }
    if (cols[0] == "__UNKNOWN__") {
      dict.set_unknown_char_cost(static_cast<std::int32_t>(*cost));
      continue;
    }
    try {
      dict.add({std::string(cols[0]), static_cast<std::int32_t>(*cost)});
    } catch (const Error& e) {
      fail(e.kind(), where + ": " + e.what());
    }
  }
  return dict;
}

inline LexDictionary load_dictionary_file(const std::string& path) {
  return load_dictionary(text::read_file(path));
}

inline std::string serialize_dictionary(const LexDictionary& dict) {
  std::string out;
  for (const auto& e : dict.entries()) {
    out += e.surface;
    out += '\t';
    out += std::to_string(e.cost);
    out += '\n';
  }
  out += "__UNKNOWN__\t" + std::to_string(dict.unknown_char_cost()) + "\n";
  return out;
}

enum class TokenSource : unsigned char { dictionary, unknown, sentinel };

struct LatticeNode {
  std::size_t begin = 0;  // character offsets, end exclusive
  std::size_t end = 0;
  std::int64_t cost = 0;
  TokenSource source = TokenSource::dictionary;
  std::int32_t entry = -1;  // dictionary entry index, -1 otherwise

  std::size_t length() const noexcept { return end - begin; }
};

struct Lattice {
  std::string text;
  std::vector<std::size_t> byte_offsets;  // character boundary -> byte offset
  std::vector<std::vector<LatticeNode>> starting_at;  // indexed by begin
  LatticeNode bos;
  LatticeNode eos;

  std::size_t length() const noexcept { return starting_at.size(); }

  std::string_view surface(const LatticeNode& n) const {
    return std::string_view(text).substr(byte_offsets[n.begin], byte_offsets[n.end] - byte_offsets[n.begin]);
  }
};

/// All dictionary matches, plus one unknown node at each position unless the
/// single character is an entry costing no more than the unknown cost. The
/// unknown node survives a pricier entry so that adding entries can never
/// raise the minimum cost.
inline Lattice build_lattice(std::string_view text, const LexDictionary& dict) {
  Lattice lat;
  lat.text = std::string(text);
  lat.byte_offsets = utf8::boundaries(text);
  const std::u32string chars = utf8::decode(text);
  const std::size_t n = chars.size();
  lat.starting_at.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& nodes = lat.starting_at[i];
    bool cheap_single = false;
    dict.common_prefix(chars, i, [&](std::size_t len, std::uint32_t idx) {
      nodes.push_back({i, i + len, dict.entries()[idx].cost, TokenSource::dictionary,
                       static_cast<std::int32_t>(idx)});
      cheap_single |= len == 1 && dict.entries()[idx].cost <= dict.unknown_char_cost();
    });
    if (!cheap_single) {
      nodes.push_back({i, i + 1, dict.unknown_char_cost(), TokenSource::unknown, -1});
    }
  }
  lat.bos = {0, 0, 0, TokenSource::sentinel, -1};
  lat.eos = {n, n, 0, TokenSource::sentinel, -1};
  return lat;
}

/// Optional cost between adjacent nodes (BOS/EOS included). Empty means 0.
using ConnectionCost = std::function<std::int64_t(const LatticeNode& left, const LatticeNode& right)>;

struct Token {
  std::string surface;
  std::size_t begin = 0;  // character offsets
  std::size_t end = 0;
  TokenSource source = TokenSource::dictionary;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Segmentation {
  std::vector<Token> tokens;
  std::int64_t total_cost = 0;
};

/// Minimum total cost path. Ties go to fewer tokens, then to the path whose
/// span lengths read left to right are lexicographically largest (longest
/// first). Decoding runs right to left so the tie rule is applied greedily
/// from the start of the string.
inline Segmentation decode_min_cost(const Lattice& lat, const ConnectionCost& connection = {}) {
  const auto conn = [&](const LatticeNode& l, const LatticeNode& r) -> std::int64_t {
    return connection ? connection(l, r) : 0;
  };
  struct Best {
    std::int64_t cost = 0;  // suffix cost after this node, connection included
    std::size_t count = 0;
    std::int32_t next = -1;  // index into starting_at[node.end], -1 = EOS
  };
  const std::size_t n = lat.length();
  std::vector<std::vector<Best>> best(n);
  for (std::size_t i = 0; i < n; ++i) best[i].resize(lat.starting_at[i].size());

  auto choose = [&](const LatticeNode& from) {
    Best b;
    if (from.end == n) {
      b.cost = conn(from, lat.eos);
      return b;
    }
    bool have = false;
    std::size_t best_len = 0;
    const auto& succ = lat.starting_at[from.end];
    for (std::size_t k = 0; k < succ.size(); ++k) {
      const auto& m = succ[k];
      const Best& sm = best[from.end][k];
      const std::int64_t cost = conn(from, m) + m.cost + sm.cost;
      const std::size_t count = sm.count + 1;
      const bool better = !have || cost < b.cost || (cost == b.cost && count < b.count) ||
                          (cost == b.cost && count == b.count && m.length() > best_len);
      if (better) {
        have = true;
        b = {cost, count, static_cast<std::int32_t>(k)};
        best_len = m.length();
      }
    }
    return b;
  };

  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = 0; k < lat.starting_at[i].size(); ++k) best[i][k] = choose(lat.starting_at[i][k]);
  }
  const Best start = choose(lat.bos);

  Segmentation seg;
  seg.total_cost = start.cost;
  std::size_t pos = 0;
  std::int32_t k = start.next;
  while (k >= 0) {
    const LatticeNode& node = lat.starting_at[pos][static_cast<std::size_t>(k)];
    seg.tokens.push_back({std::string(lat.surface(node)), node.begin, node.end,
                          node.source});
    k = best[pos][static_cast<std::size_t>(k)].next;
    pos = node.end;
  }
  return seg;
}

inline Segmentation segment_min_cost(std::string_view text, const LexDictionary& dict,
                                     const ConnectionCost& connection = {}) {
  return decode_min_cost(build_lattice(text, dict), connection);
}

inline std::vector<std::string> tokenize(std::string_view text, const LexDictionary& dict) {
  auto seg = segment_min_cost(text, dict);
  std::vector<std::string> out;
  out.reserve(seg.tokens.size());
  for (auto& t : seg.tokens) out.push_back(std::move(t.surface));
  return out;
}

}  // namespace tokbench
