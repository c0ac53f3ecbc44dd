#pragma once

#include <concepts>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/lattice.hpp"
#include "tokbench/subword.hpp"

namespace tokbench {

template <typename T>
concept Tokenizer = requires(const T& t, std::string_view text) {
  { t(text) } -> std::convertible_to<std::vector<std::string>>;
};

enum class TokenizerKind { lattice, subword };

inline const char* to_string(TokenizerKind k) { return k == TokenizerKind::lattice ? "lattice" : "subword"; }

/// Short name used in report tables.
inline const char* display_name(TokenizerKind k) { return k == TokenizerKind::lattice ? "Lattice" : "SP"; }

inline TokenizerKind parse_tokenizer_kind(std::string_view s) {
  if (s == "lattice") return TokenizerKind::lattice;
  if (s == "subword") return TokenizerKind::subword;
  fail(ErrorKind::config, "unknown tokenizer '" + std::string(s) + "' (expected lattice or subword)");
}

class LatticeTokenizer {
 public:
  explicit LatticeTokenizer(std::shared_ptr<const LexDictionary> dict) : dict_(std::move(dict)) {}
  std::vector<std::string> operator()(std::string_view text) const { return tokenize(text, *dict_); }
  const LexDictionary& dictionary() const { return *dict_; }

 private:
  std::shared_ptr<const LexDictionary> dict_;
};

class SubwordTokenizer {
 public:
  explicit SubwordTokenizer(std::shared_ptr<const SubwordVocab> vocab) : vocab_(std::move(vocab)) {}
  std::vector<std::string> operator()(std::string_view text) const { return encode(text, *vocab_); }
  const SubwordVocab& vocab() const { return *vocab_; }

 private:
  std::shared_ptr<const SubwordVocab> vocab_;
};

using AnyTokenizer = std::function<std::vector<std::string>(std::string_view)>;

static_assert(Tokenizer<LatticeTokenizer>);
static_assert(Tokenizer<SubwordTokenizer>);
static_assert(Tokenizer<AnyTokenizer>);

}  // namespace tokbench
