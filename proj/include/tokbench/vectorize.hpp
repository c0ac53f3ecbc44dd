#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/parallel.hpp"
#include "tokbench/sparse.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

using TokenizedDoc = std::vector<std::string>;

/// Token -> column map. Columns follow ascending byte order of the tokens.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// `tokens` must be strictly increasing; df[i] >= 1.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> df)
      : tokens_(std::move(tokens)), df_(std::move(df)) {
    if (tokens_.size() != df_.size()) fail(ErrorKind::internal, "vocabulary size mismatch");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (i > 0 && !(tokens_[i - 1] < tokens_[i])) fail(ErrorKind::parse, "vocabulary tokens not strictly increasing");
      if (df_[i] == 0) fail(ErrorKind::parse, "vocabulary token with zero document frequency");
      index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  std::size_t df(std::size_t i) const { return df_[i]; }

  std::optional<std::uint32_t> index(const std::string& token) const {
    const auto it = index_.find(token);
    return it == index_.end() ? std::nullopt : std::optional<std::uint32_t>(it->second);
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> df_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Smoothed idf, raw term counts, L2 row normalization:
///   idf(t) = ln((1 + N) / (1 + df(t))) + 1
struct TfidfModel {
  Vocabulary vocabulary;
  std::vector<double> idf;
  std::size_t n_docs = 0;

  std::size_t features() const noexcept { return idf.size(); }
};

inline double smooth_idf(std::size_t n_docs, std::size_t df) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

inline TfidfModel fit_tfidf(const std::vector<TokenizedDoc>& docs) {
  if (docs.empty()) fail(ErrorKind::invalid_argument, "cannot fit TF-IDF on zero documents");
  std::unordered_map<std::string, std::size_t> df;
  std::vector<const std::string*> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for (const auto& tok : doc) seen.push_back(&tok);
    std::sort(seen.begin(), seen.end(), [](const auto* a, const auto* b) { return *a < *b; });
    const std::string* prev = nullptr;
    for (const auto* tok : seen) {
      if (prev && *prev == *tok) continue;
      ++df[*tok];
      prev = tok;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> sorted(df.begin(), df.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> tokens;
  std::vector<std::size_t> counts;
  tokens.reserve(sorted.size());
  counts.reserve(sorted.size());
  for (auto& [tok, c] : sorted) {
    tokens.push_back(std::move(tok));
    counts.push_back(c);
  }
  TfidfModel model;
  model.n_docs = docs.size();
  model.idf.reserve(counts.size());
  for (std::size_t c : counts) model.idf.push_back(smooth_idf(model.n_docs, c));
  model.vocabulary = Vocabulary(std::move(tokens), std::move(counts));
  return model;
}

/// TF-IDF row for one document. Unknown tokens are ignored; a document with
/// no known tokens yields an empty (all-zero) row.
inline std::vector<SparseEntry> tfidf_row(const TfidfModel& model, const TokenizedDoc& doc) {
  std::vector<SparseEntry> row;
  std::vector<std::uint32_t> cols;
  cols.reserve(doc.size());
  for (const auto& tok : doc) {
    if (const auto idx = model.vocabulary.index(tok)) cols.push_back(*idx);
  }
  std::sort(cols.begin(), cols.end());
  for (std::size_t i = 0; i < cols.size();) {
    std::size_t j = i;
    while (j < cols.size() && cols[j] == cols[i]) ++j;
    row.push_back({cols[i], static_cast<double>(j - i) * model.idf[cols[i]]});
    i = j;
  }
  double norm = 0.0;
  for (const auto& e : row) norm += e.value * e.value;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (auto& e : row) e.value /= norm;
  }
  return row;
}

inline SparseMatrix transform_tfidf(const TfidfModel& model, const std::vector<TokenizedDoc>& docs,
                                    unsigned threads = 1) {
  std::vector<std::vector<SparseEntry>> rows(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t i) { rows[i] = tfidf_row(model, docs[i]); });
  SparseMatrix m(model.features());
  for (const auto& r : rows) m.push_row(r);
  return m;
}

template <typename Tokenizer>
std::vector<TokenizedDoc> tokenize_all(const Tokenizer& tokenizer, const std::vector<std::string>& texts,
                                       unsigned threads = 1) {
  std::vector<TokenizedDoc> docs(texts.size());
  parallel_for(texts.size(), threads, [&](std::size_t i) { docs[i] = tokenizer(texts[i]); });
  return docs;
}

struct TimedVectorization {
  TfidfModel model;
  SparseMatrix matrix;
  double elapsed_seconds = 0.0;  // tokenize + fit + transform, steady clock
};

template <typename Tokenizer>
TimedVectorization fit_transform_timed(const Tokenizer& tokenizer, const std::vector<std::string>& texts,
                                       unsigned threads = 1) {
  if (texts.empty()) fail(ErrorKind::invalid_argument, "cannot vectorize an empty dataset");
  const auto start = std::chrono::steady_clock::now();
  const auto docs = tokenize_all(tokenizer, texts, threads);
  TimedVectorization out;
  out.model = fit_tfidf(docs);
  out.matrix = transform_tfidf(out.model, docs, threads);
  const auto stop = std::chrono::steady_clock::now();
  out.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
  return out;
}

/// `#tfidf v1 n_docs=<N>` then `token<TAB>index<TAB>df<TAB>idf` per column.
inline std::string serialize_tfidf(const TfidfModel& model) {
  std::string out = "#tfidf v1 n_docs=" + std::to_string(model.n_docs) + "\n";
  for (std::size_t i = 0; i < model.features(); ++i) {
    out += text::escape(model.vocabulary.token(i));
    out += '\t' + std::to_string(i) + '\t' + std::to_string(model.vocabulary.df(i)) + '\t';
    out += text::format_exact(model.idf[i]);
    out += '\n';
  }
  return out;
}

inline TfidfModel parse_tfidf(std::string_view data) {
  const auto rows = text::lines(data);
  constexpr std::string_view header = "#tfidf v1 n_docs=";
  if (rows.empty() || rows[0].rfind(header, 0) != 0) fail(ErrorKind::parse, "tfidf model: missing header");
  const auto n = text::parse_int(rows[0].substr(header.size()));
  if (!n || *n <= 0) fail(ErrorKind::parse, "tfidf model: bad n_docs");
  TfidfModel model;
  model.n_docs = static_cast<std::size_t>(*n);
  std::vector<std::string> tokens;
  std::vector<std::size_t> df;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto cols = text::split(rows[i], '\t');
    const std::string where = "tfidf model line " + std::to_string(i + 1);
    if (cols.size() != 4) fail(ErrorKind::parse, where + ": expected 4 columns");
    const auto idx = text::parse_int(cols[1]);
    const auto d = text::parse_int(cols[2]);
    const auto idf = text::parse_double(cols[3]);
    if (!idx || !d || !idf || *d <= 0) fail(ErrorKind::parse, where + ": bad numeric field");
    if (static_cast<std::size_t>(*idx) != tokens.size()) fail(ErrorKind::parse, where + ": indices must be dense and ordered");
    tokens.push_back(text::unescape(cols[0]));
    df.push_back(static_cast<std::size_t>(*d));
    model.idf.push_back(*idf);
  }
  model.vocabulary = Vocabulary(std::move(tokens), std::move(df));
  return model;
}

}  // namespace tokbench
