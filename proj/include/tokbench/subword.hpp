#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/parallel.hpp"
#include "tokbench/prefix_trie.hpp"
#include "tokbench/text_io.hpp"
#include "tokbench/utf8.hpp"

// Unigram language-model subword tokenizer: seed candidates from substring
// counts, EM over each sentence's segmentation lattice, prune by likelihood
// loss, Viterbi encode.
namespace tokbench {

inline constexpr char32_t kMetaSymbol = U'▁';

struct TrainerConfig {
  std::size_t vocab_size = 2000;  // 32000 for full-size corpora
  std::size_t max_piece_len = 8;
  std::size_t seed_size = 0;  // 0 means 20 * vocab_size
  double shrink_factor = 0.75;
  std::size_t em_iters_per_round = 2;
  std::size_t max_sentence_len = 4096;
  std::size_t min_piece_freq = 2;  // multi-character seed candidates only
  bool normalize = true;           // whitespace -> meta symbol, meta prefix
  unsigned threads = 1;            // E-step workers; never affects results

  std::size_t effective_seed_size() const { return seed_size ? seed_size : 20 * vocab_size; }
};

inline bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f';
}

/// Replaces each whitespace run with one meta symbol and prefixes one meta
/// symbol to non-empty text.
inline std::u32string normalize(std::u32string_view text, char32_t meta = kMetaSymbol) {
  std::u32string out;
  if (text.empty()) return out;
  out.reserve(text.size() + 1);
  out.push_back(meta);
  bool in_space = false;
  for (char32_t c : text) {
    if (is_space(c)) {
      if (!in_space) out.push_back(meta);
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  return out;
}

inline std::string normalize(std::string_view text, char32_t meta = kMetaSymbol) {
  return utf8::encode(normalize(utf8::decode(text), meta));
}

struct Piece {
  std::string text;
  double log_prob = 0.0;

  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Piece inventory with natural-log probabilities. Pieces are kept sorted by
/// descending log_prob, ties by piece bytes, which is also the file order.
class SubwordVocab {
 public:
  SubwordVocab() = default;

  static SubwordVocab from_pieces(std::vector<Piece> pieces, TrainerConfig config = {},
                                  char32_t meta = kMetaSymbol) {
    SubwordVocab v;
    v.config_ = config;
    v.meta_ = meta;
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
      if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
      return a.text < b.text;
    });
    v.pieces_ = std::move(pieces);
    v.chars_.reserve(v.pieces_.size());
    for (std::size_t i = 0; i < v.pieces_.size(); ++i) {
      const auto& p = v.pieces_[i];
      if (p.text.empty()) fail(ErrorKind::parse, "empty subword piece");
      if (!std::isfinite(p.log_prob)) fail(ErrorKind::parse, "non-finite log-probability for piece '" + p.text + "'");
      v.chars_.push_back(utf8::decode(p.text));
      if (!v.trie_.insert(v.chars_.back(), static_cast<std::uint32_t>(i))) {
        fail(ErrorKind::duplicate_entry, "duplicate subword piece '" + p.text + "'");
      }
    }
    return v;
  }

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  std::size_t size() const noexcept { return pieces_.size(); }
  const TrainerConfig& config() const noexcept { return config_; }
  char32_t meta_symbol() const noexcept { return meta_; }
  bool normalizes() const noexcept { return config_.normalize; }

  const std::u32string& chars(std::size_t i) const { return chars_[i]; }
  double log_prob(std::size_t i) const { return pieces_[i].log_prob; }
  bool is_single_char(std::size_t i) const { return chars_[i].size() == 1; }

  std::optional<std::size_t> index(std::u32string_view piece) const {
    const auto* idx = trie_.find(piece);
    return idx ? std::optional<std::size_t>(*idx) : std::nullopt;
  }
  std::optional<std::size_t> index(std::string_view piece) const { return index(utf8::decode(piece)); }

  /// visit(length, piece_index) for every piece starting at `start`.
  template <typename Visit>
  void common_prefix(std::u32string_view text, std::size_t start, Visit&& visit) const {
    trie_.common_prefix(text, start, [&](std::size_t len, std::uint32_t idx) { visit(len, std::size_t{idx}); });
  }

  /// Text as the model sees it: normalized when the model was trained that way.
  std::u32string prepare(std::string_view text) const {
    auto chars = utf8::decode(text);
    return config_.normalize ? normalize(chars, meta_) : chars;
  }

 private:
  std::vector<Piece> pieces_;
  std::vector<std::u32string> chars_;
  PrefixTrie<std::uint32_t> trie_;
  TrainerConfig config_;
  char32_t meta_ = kMetaSymbol;
};

namespace detail {

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

inline std::string describe_char(char32_t c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
  return "'" + utf8::encode(std::u32string(1, c)) + "' (" + buf + ")";
}

inline void require_encodable(std::u32string_view s, const SubwordVocab& vocab) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!vocab.index(s.substr(i, 1))) {
      fail(ErrorKind::unencodable,
           "character " + describe_char(s[i]) + " at offset " + std::to_string(i) + " is not in the vocabulary");
    }
  }
}

/// Deduplicated training sentences, weighted by multiplicity, in first
/// occurrence order.
struct WeightedCorpus {
  std::vector<std::u32string> sentences;
  std::vector<double> weights;

  static WeightedCorpus from(std::vector<std::u32string> raw) {
    WeightedCorpus wc;
    std::unordered_map<std::u32string, std::size_t> seen;
    for (auto& s : raw) {
      if (s.empty()) continue;
      const auto [it, inserted] = seen.try_emplace(s, wc.sentences.size());
      if (inserted) {
        wc.sentences.push_back(std::move(s));
        wc.weights.push_back(1.0);
      } else {
        wc.weights[it->second] += 1.0;
      }
    }
    return wc;
  }
};

struct EStepResult {
  std::vector<double> expected;  // per piece index
  double log_likelihood = 0.0;
};

// Fixed chunking, independent of the thread count, so the reduction order and
// hence every floating-point sum is the same however many workers run.
inline constexpr std::size_t kEStepChunks = 16;

inline EStepResult expectation(const WeightedCorpus& corpus, const SubwordVocab& vocab, unsigned threads) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const std::size_t n_sent = corpus.sentences.size();
  const std::size_t chunks = std::min(kEStepChunks, std::max<std::size_t>(n_sent, 1));
  std::vector<EStepResult> partial(chunks);

  parallel_for(chunks, threads, [&](std::size_t c) {
    auto& acc = partial[c];
    acc.expected.assign(vocab.size(), 0.0);
    const std::size_t lo = n_sent * c / chunks;
    const std::size_t hi = n_sent * (c + 1) / chunks;
    std::vector<double> alpha, beta;
    for (std::size_t s = lo; s < hi; ++s) {
      const std::u32string& text = corpus.sentences[s];
      const std::size_t n = text.size();
      alpha.assign(n + 1, neg_inf);
      beta.assign(n + 1, neg_inf);
      alpha[0] = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == neg_inf) continue;
        vocab.common_prefix(text, i, [&](std::size_t len, std::size_t idx) {
          alpha[i + len] = log_add(alpha[i + len], alpha[i] + vocab.log_prob(idx));
        });
      }
      const double z = alpha[n];
      if (z == neg_inf) require_encodable(text, vocab);
      beta[n] = 0.0;
      for (std::size_t i = n; i-- > 0;) {
        vocab.common_prefix(text, i, [&](std::size_t len, std::size_t idx) {
          beta[i] = log_add(beta[i], vocab.log_prob(idx) + beta[i + len]);
        });
      }
      const double w = corpus.weights[s];
      for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == neg_inf) continue;
        vocab.common_prefix(text, i, [&](std::size_t len, std::size_t idx) {
          acc.expected[idx] += w * std::exp(alpha[i] + vocab.log_prob(idx) + beta[i + len] - z);
        });
      }
      acc.log_likelihood += w * z;
    }
  });

  EStepResult total;
  total.expected.assign(vocab.size(), 0.0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < total.expected.size(); ++i) total.expected[i] += p.expected[i];
    total.log_likelihood += p.log_likelihood;
  }
  return total;
}

/// log-prob = log(expected / total). Multi-character pieces whose expected
/// count underflowed to zero are dropped; single characters are floored at
/// the smallest normal double so the vocabulary stays total.
inline SubwordVocab maximization(const SubwordVocab& vocab, const std::vector<double>& expected) {
  std::vector<Piece> kept;
  std::vector<double> counts;
  kept.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    double c = expected[i];
    if (!(c > 0.0)) {
      if (!vocab.is_single_char(i)) continue;
      c = std::numeric_limits<double>::min();
    }
    kept.push_back({vocab.pieces()[i].text, 0.0});
    counts.push_back(c);
  }
  double total = 0.0;
  for (double c : counts) total += c;
  const double log_total = std::log(total);
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].log_prob = std::log(counts[i]) - log_total;
  return SubwordVocab::from_pieces(std::move(kept), vocab.config(), vocab.meta_symbol());
}

inline SubwordVocab renormalized(std::vector<Piece> pieces, const SubwordVocab& like) {
  double lse = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) lse = log_add(lse, p.log_prob);
  for (auto& p : pieces) p.log_prob -= lse;
  return SubwordVocab::from_pieces(std::move(pieces), like.config(), like.meta_symbol());
}

struct ViterbiCell {
  double score = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  std::size_t len = 0;
  std::size_t piece = 0;
};

/// Best segmentation by suffix DP: maximal score, then fewer pieces, then the
/// longest first span. `skip` excludes one piece index (used by pruning).
inline std::vector<ViterbiCell> viterbi(std::u32string_view text, const SubwordVocab& vocab,
                                        std::size_t skip = std::numeric_limits<std::size_t>::max()) {
  const std::size_t n = text.size();
  std::vector<ViterbiCell> best(n + 1);
  best[n].score = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    auto& cell = best[i];
    vocab.common_prefix(text, i, [&](std::size_t len, std::size_t idx) {
      if (idx == skip) return;
      const auto& next = best[i + len];
      if (next.score == -std::numeric_limits<double>::infinity()) return;
      const double score = vocab.log_prob(idx) + next.score;
      const std::size_t count = next.count + 1;
      if (score > cell.score || (score == cell.score && count < cell.count) ||
          (score == cell.score && count == cell.count && len > cell.len)) {
        cell = {score, count, len, idx};
      }
    });
  }
  return best;
}

}  // namespace detail

struct EmResult {
  SubwordVocab vocab;
  double log_likelihood = 0.0;  // before the update
};

/// One EM step over an already-normalized corpus.
inline EmResult em_iteration(const std::vector<std::string>& corpus, const SubwordVocab& vocab, unsigned threads = 1) {
  std::vector<std::u32string> raw;
  raw.reserve(corpus.size());
  for (const auto& s : corpus) raw.push_back(utf8::decode(s));
  const auto wc = detail::WeightedCorpus::from(std::move(raw));
  const auto e = detail::expectation(wc, vocab, threads);
  return {detail::maximization(vocab, e.expected), e.log_likelihood};
}

/// Removal loss for every piece: expected count times the log-probability
/// lost by falling back to the best segmentation without the piece. Single
/// characters get +inf (never removed).
inline std::vector<double> prune_losses(const SubwordVocab& vocab, const std::vector<double>& expected) {
  std::vector<double> loss(vocab.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.is_single_char(i)) continue;
    const auto best = detail::viterbi(vocab.chars(i), vocab, i);
    loss[i] = expected[i] * (vocab.log_prob(i) - best[0].score);
  }
  return loss;
}

namespace detail {

inline SubwordVocab prune_with(const SubwordVocab& vocab, const std::vector<double>& expected, double shrink_factor,
                               std::size_t min_size) {
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    fail(ErrorKind::invalid_argument, "shrink_factor must be in (0, 1)");
  }
  const auto loss = prune_losses(vocab, expected);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!vocab.is_single_char(i)) candidates.push_back(i);
  }
  std::size_t remove =
      static_cast<std::size_t>(std::ceil((1.0 - shrink_factor) * static_cast<double>(vocab.size()) - 1e-9));
  remove = std::min(remove, candidates.size());
  remove = std::min(remove, vocab.size() > min_size ? vocab.size() - min_size : 0);
  if (remove == 0) return vocab;
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (loss[a] != loss[b]) return loss[a] < loss[b];
    return vocab.pieces()[a].text < vocab.pieces()[b].text;
  });
  std::vector<bool> drop(vocab.size(), false);
  for (std::size_t k = 0; k < remove; ++k) drop[candidates[k]] = true;
  std::vector<Piece> kept;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!drop[i]) kept.push_back(vocab.pieces()[i]);
  }
  return renormalized(std::move(kept), vocab);
}

}  // namespace detail

/// Drops the ceil((1 - shrink_factor) * |vocab|) multi-character pieces with
/// the smallest removal loss, never going below `min_size` pieces, then
/// renormalizes.
inline SubwordVocab prune(const SubwordVocab& vocab, const std::vector<std::string>& corpus, double shrink_factor,
                          std::size_t min_size = 0, unsigned threads = 1) {
  std::vector<std::u32string> raw;
  for (const auto& s : corpus) raw.push_back(utf8::decode(s));
  const auto wc = detail::WeightedCorpus::from(std::move(raw));
  const auto e = detail::expectation(wc, vocab, threads);
  return detail::prune_with(vocab, e.expected, shrink_factor, min_size);
}

/// Initial candidates over an already-normalized corpus: every single
/// character, plus the best multi-character substrings (length <=
/// max_piece_len, frequency >= min_piece_freq) ranked by frequency * length,
/// up to seed_size pieces in total. Probabilities proportional to frequency.
inline SubwordVocab seed_vocab(const std::vector<std::string>& corpus, const TrainerConfig& config) {
  std::vector<std::u32string> sentences;
  for (const auto& s : corpus) sentences.push_back(utf8::decode(s));
  const auto wc = detail::WeightedCorpus::from(std::move(sentences));
  if (wc.sentences.empty()) fail(ErrorKind::invalid_argument, "cannot seed a vocabulary from an empty corpus");

  std::unordered_map<std::u32string, double> freq;
  for (std::size_t s = 0; s < wc.sentences.size(); ++s) {
    const auto& text = wc.sentences[s];
    for (std::size_t i = 0; i < text.size(); ++i) {
      const std::size_t max_len = std::min(config.max_piece_len, text.size() - i);
      for (std::size_t len = 1; len <= max_len; ++len) freq[text.substr(i, len)] += wc.weights[s];
    }
  }

  std::vector<std::pair<std::u32string, double>> singles, multis;
  for (auto& [piece, count] : freq) {
    if (piece.size() == 1) {
      singles.emplace_back(piece, count);
    } else if (count >= static_cast<double>(config.min_piece_freq)) {
      multis.emplace_back(piece, count);
    }
  }
  std::sort(singles.begin(), singles.end());
  std::sort(multis.begin(), multis.end(), [](const auto& a, const auto& b) {
    const double sa = a.second * static_cast<double>(a.first.size());
    const double sb = b.second * static_cast<double>(b.first.size());
    if (sa != sb) return sa > sb;
    return a.first < b.first;
  });
  const std::size_t cap = config.effective_seed_size();
  const std::size_t room = cap > singles.size() ? cap - singles.size() : 0;
  if (multis.size() > room) multis.resize(room);

  double total = 0.0;
  for (const auto& [p, c] : singles) total += c;
  for (const auto& [p, c] : multis) total += c;
  const double log_total = std::log(total);
  std::vector<Piece> pieces;
  pieces.reserve(singles.size() + multis.size());
  for (const auto* group : {&singles, &multis}) {
    for (const auto& [p, c] : *group) pieces.push_back({utf8::encode(p), std::log(c) - log_total});
  }
  return SubwordVocab::from_pieces(std::move(pieces), config);
}

/// Full training: normalize, seed, then alternate EM rounds and pruning until
/// the vocabulary fits; the loop always ends on an EM round.
inline SubwordVocab train_subword(const std::vector<std::string>& corpus, const TrainerConfig& config) {
  if (corpus.empty()) fail(ErrorKind::invalid_argument, "cannot train on an empty corpus");
  if (config.vocab_size == 0) fail(ErrorKind::invalid_argument, "vocab_size must be positive");
  if (config.max_piece_len == 0) fail(ErrorKind::invalid_argument, "max_piece_len must be positive");
  if (config.max_sentence_len == 0) fail(ErrorKind::invalid_argument, "max_sentence_len must be positive");
  if (!(config.shrink_factor > 0.0 && config.shrink_factor < 1.0)) {
    fail(ErrorKind::invalid_argument, "shrink_factor must be in (0, 1)");
  }

  std::vector<std::u32string> pieces_of_text;
  for (const auto& s : corpus) {
    auto chars = utf8::decode(s);
    if (config.normalize) chars = normalize(chars);
    for (std::size_t i = 0; i < chars.size(); i += config.max_sentence_len) {
      pieces_of_text.push_back(chars.substr(i, config.max_sentence_len));
    }
  }
  std::vector<std::string> prepared;
  prepared.reserve(pieces_of_text.size());
  for (const auto& s : pieces_of_text) prepared.push_back(utf8::encode(s));
  const auto wc = detail::WeightedCorpus::from(std::move(pieces_of_text));
  if (wc.sentences.empty()) fail(ErrorKind::invalid_argument, "training corpus contains no characters");

  std::vector<char32_t> alphabet;
  for (const auto& s : wc.sentences) alphabet.insert(alphabet.end(), s.begin(), s.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  if (config.vocab_size < alphabet.size()) {
    fail(ErrorKind::invalid_argument, "vocab_size " + std::to_string(config.vocab_size) +
                                          " is smaller than the corpus alphabet (" +
                                          std::to_string(alphabet.size()) + " characters)");
  }

  SubwordVocab vocab = seed_vocab(prepared, config);
  for (;;) {
    for (std::size_t it = 0; it < std::max<std::size_t>(config.em_iters_per_round, 1); ++it) {
      const auto e = detail::expectation(wc, vocab, config.threads);
      vocab = detail::maximization(vocab, e.expected);
    }
    if (vocab.size() <= config.vocab_size) break;
    const auto e = detail::expectation(wc, vocab, config.threads);
    const std::size_t before = vocab.size();
    vocab = detail::prune_with(vocab, e.expected, config.shrink_factor, config.vocab_size);
    if (vocab.size() == before) break;
  }
  return vocab;
}

struct Encoding {
  std::vector<std::string> pieces;
  double score = 0.0;  // sum of piece log-probabilities
};

/// Viterbi-best segmentation (max total log-prob; ties to fewer pieces, then
/// longest-first spans).
inline Encoding encode_scored(std::string_view text, const SubwordVocab& vocab) {
  const std::u32string chars = vocab.prepare(text);
  detail::require_encodable(chars, vocab);
  const auto best = detail::viterbi(chars, vocab);
  Encoding enc;
  enc.score = best[0].score;
  for (std::size_t i = 0; i < chars.size(); i += best[i].len) {
    enc.pieces.push_back(vocab.pieces()[best[i].piece].text);
  }
  return enc;
}

inline std::vector<std::string> encode(std::string_view text, const SubwordVocab& vocab) {
  return encode_scored(text, vocab).pieces;
}

/// Concatenates pieces, maps the meta symbol back to a space and strips one
/// leading space.
inline std::string decode(const std::vector<std::string>& pieces, char32_t meta = kMetaSymbol) {
  std::string joined;
  for (const auto& p : pieces) joined += p;
  std::string meta_utf8 = utf8::encode(std::u32string(1, meta));
  std::string out;
  out.reserve(joined.size());
  for (std::size_t i = 0; i < joined.size();) {
    if (joined.compare(i, meta_utf8.size(), meta_utf8) == 0) {
      out.push_back(' ');
      i += meta_utf8.size();
    } else {
      out.push_back(joined[i++]);
    }
  }
  if (!out.empty() && out.front() == ' ') out.erase(0, 1);
  return out;
}

inline std::string decode(const std::vector<std::string>& pieces, const SubwordVocab& vocab) {
  if (vocab.normalizes()) return decode(pieces, vocab.meta_symbol());
  std::string joined;
  for (const auto& p : pieces) joined += p;
  return joined;
}

/// `#unigram v1 meta=▁ vocab_size=<n> ...` followed by `piece<TAB>log_prob`
/// rows in descending log_prob order. Trainer settings follow vocab_size on
/// the header line.
inline std::string serialize_subword(const SubwordVocab& vocab) {
  const auto& c = vocab.config();
  std::string out = "#unigram v1 meta=" + utf8::encode(std::u32string(1, vocab.meta_symbol())) +
                    " vocab_size=" + std::to_string(c.vocab_size) +
                    " max_piece_len=" + std::to_string(c.max_piece_len) +
                    " seed_size=" + std::to_string(c.effective_seed_size()) +
                    " shrink_factor=" + text::format_exact(c.shrink_factor) +
                    " em_iters_per_round=" + std::to_string(c.em_iters_per_round) +
                    " max_sentence_len=" + std::to_string(c.max_sentence_len) +
                    " min_piece_freq=" + std::to_string(c.min_piece_freq) +
                    " normalize=" + (c.normalize ? "1" : "0") + "\n";
  for (const auto& p : vocab.pieces()) {
    out += text::escape(p.text);
    out += '\t';
    out += text::format_exact(p.log_prob);
    out += '\n';
  }
  return out;
}

inline SubwordVocab parse_subword(std::string_view data) {
  utf8::require_valid(data, "subword model");
  const auto rows = text::lines(data);
  if (rows.empty() || rows[0].rfind("#unigram v1 ", 0) != 0) {
    fail(ErrorKind::parse, "subword model: missing '#unigram v1' header");
  }
  TrainerConfig config;
  char32_t meta = kMetaSymbol;
  bool have_vocab_size = false;
  for (std::string_view field : text::split(rows[0].substr(12), ' ')) {
    if (field.empty()) continue;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) fail(ErrorKind::parse, "subword model: bad header field '" + std::string(field) + "'");
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    auto as_size = [&]() {
      const auto v = text::parse_int(value);
      if (!v || *v < 0) fail(ErrorKind::parse, "subword model: bad value for " + std::string(key));
      return static_cast<std::size_t>(*v);
    };
    if (key == "meta") {
      const auto cps = utf8::decode(value);
      if (cps.size() != 1) fail(ErrorKind::parse, "subword model: meta must be one character");
      meta = cps[0];
    } else if (key == "vocab_size") {
      config.vocab_size = as_size();
      have_vocab_size = true;
    } else if (key == "max_piece_len") {
      config.max_piece_len = as_size();
    } else if (key == "seed_size") {
      config.seed_size = as_size();
    } else if (key == "shrink_factor") {
      const auto v = text::parse_double(value);
      if (!v) fail(ErrorKind::parse, "subword model: bad shrink_factor");
      config.shrink_factor = *v;
    } else if (key == "em_iters_per_round") {
      config.em_iters_per_round = as_size();
    } else if (key == "max_sentence_len") {
      config.max_sentence_len = as_size();
    } else if (key == "min_piece_freq") {
      config.min_piece_freq = as_size();
    } else if (key == "normalize") {
      config.normalize = as_size() != 0;
    }
  }
  if (!have_vocab_size) fail(ErrorKind::parse, "subword model: header lacks vocab_size");
  std::vector<Piece> pieces;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto cols = text::split(rows[i], '\t');
    const auto lp = cols.size() == 2 ? text::parse_double(cols[1]) : std::nullopt;
    if (!lp) fail(ErrorKind::parse, "subword model line " + std::to_string(i + 1) + ": expected piece<TAB>log_prob");
    pieces.push_back({text::unescape(cols[0]), *lp});
  }
  return SubwordVocab::from_pieces(std::move(pieces), config, meta);
}

inline SubwordVocab load_subword_file(const std::string& path) { return parse_subword(text::read_file(path)); }

}  // namespace tokbench
