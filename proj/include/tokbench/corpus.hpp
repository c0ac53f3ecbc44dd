#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "tokbench/error.hpp"
#include "tokbench/random.hpp"
#include "tokbench/text_io.hpp"
#include "tokbench/utf8.hpp"

namespace tokbench {

enum class Sentiment : unsigned char { negative = 0, positive = 1 };

inline constexpr std::size_t kNumClasses = 2;

inline std::size_t class_index(Sentiment s) { return static_cast<std::size_t>(s); }

inline const char* to_string(Sentiment s) {
  return s == Sentiment::positive ? "positive" : "negative";
}

struct ReviewRecord {
  Sentiment label = Sentiment::negative;
  std::string title;
  std::string body;

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

/// Ordered review records. Immutable once built; construct through
/// Dataset::from_records so class_counts stays consistent.
class Dataset {
 public:
  Dataset() = default;

  static Dataset from_records(std::vector<ReviewRecord> records) {
    Dataset d;
    d.records_ = std::move(records);
    for (const auto& r : d.records_) ++d.class_counts_[class_index(r.label)];
    return d;
  }

  const std::vector<ReviewRecord>& records() const noexcept { return records_; }
  const std::array<std::size_t, kNumClasses>& class_counts() const noexcept { return class_counts_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  std::vector<std::string> bodies() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.body);
    return out;
  }

  std::vector<Sentiment> labels() const {
    std::vector<Sentiment> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.label);
    return out;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<ReviewRecord> records_;
  std::array<std::size_t, kNumClasses> class_counts_{};
};

namespace detail {

// RFC-4180 reader. Quoted fields may contain separators, doubled quotes and
// raw line breaks. Returns rows with the 1-based line each row started on.
struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

inline std::vector<CsvRow> read_csv(std::string_view in) {
  std::vector<CsvRow> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < in.size()) {
    CsvRow row;
    row.line = line;
    for (;;) {
      std::string field;
      if (pos < in.size() && in[pos] == '"') {
        ++pos;
        for (;;) {
          if (pos >= in.size()) {
            fail(ErrorKind::malformed_row,
                 "row " + std::to_string(rows.size() + 1) + ": unterminated quoted field");
          }
          const char c = in[pos++];
          if (c == '"') {
            if (pos < in.size() && in[pos] == '"') {
              field.push_back('"');
              ++pos;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        if (pos < in.size() && in[pos] != ',' && in[pos] != '\n' && in[pos] != '\r') {
          fail(ErrorKind::malformed_row,
               "row " + std::to_string(rows.size() + 1) + ": text after closing quote");
        }
      } else {
        while (pos < in.size() && in[pos] != ',' && in[pos] != '\n' && in[pos] != '\r') {
          if (in[pos] == '"') {
            fail(ErrorKind::malformed_row,
                 "row " + std::to_string(rows.size() + 1) + ": quote inside unquoted field");
          }
          field.push_back(in[pos++]);
        }
      }
      row.fields.push_back(std::move(field));
      if (pos < in.size() && in[pos] == ',') {
        ++pos;
        continue;
      }
      break;
    }
    if (pos < in.size() && in[pos] == '\r') ++pos;
    if (pos < in.size() && in[pos] == '\n') {
      ++pos;
      ++line;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void append_csv_field(std::string& out, std::string_view field) {
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace detail

/// Parses the review CSV: no header, columns (label, title, body), label 1 is
/// negative and 2 is positive. Field bytes are kept verbatim.
inline Dataset parse_review_csv(std::string_view input) {
  auto rows = detail::read_csv(input);
  std::vector<ReviewRecord> records;
  records.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    const std::string where = "row " + std::to_string(i + 1) + " (line " + std::to_string(row.line) + ")";
    if (row.fields.size() != 3) {
      fail(ErrorKind::malformed_row,
           where + ": expected 3 fields, got " + std::to_string(row.fields.size()));
    }
    for (const auto& f : row.fields) utf8::require_valid(f, where);
    ReviewRecord rec;
    if (row.fields[0] == "1") {
      rec.label = Sentiment::negative;
    } else if (row.fields[0] == "2") {
      rec.label = Sentiment::positive;
    } else {
      fail(ErrorKind::invalid_label, where + ": label must be 1 or 2, got '" + row.fields[0] + "'");
    }
    rec.title = std::move(row.fields[1]);
    rec.body = std::move(row.fields[2]);
    records.push_back(std::move(rec));
  }
  return Dataset::from_records(std::move(records));
}

inline Dataset parse_review_csv(std::istream& in) { return parse_review_csv(text::read_stream(in)); }

inline Dataset load_review_csv(const std::string& path) {
  return parse_review_csv(text::read_file(path));
}

/// Emits the same CSV dialect the parser reads; every field is quoted.
inline std::string serialize_review_csv(const Dataset& data) {
  std::string out;
  for (const auto& r : data.records()) {
    out += r.label == Sentiment::positive ? "\"2\"," : "\"1\",";
    detail::append_csv_field(out, r.title);
    out.push_back(',');
    detail::append_csv_field(out, r.body);
    out.push_back('\n');
  }
  return out;
}

/// Number of records retained by random_sample for a given size.
inline std::size_t sample_count(std::size_t n, double fraction) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const double exact = fraction * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::floor(exact + 1e-9 * std::max(1.0, exact))));
}

/// Uniform sample without replacement of floor(fraction * N) records,
/// keeping file order. Deterministic for a fixed seed (mt19937_64 + partial
/// Fisher-Yates).
inline Dataset random_sample(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorKind::invalid_argument, "sample fraction must be in (0, 1], got " + text::format_exact(fraction));
  }
  const std::size_t n = data.size();
  const std::size_t keep = sample_count(n, fraction);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::vector<ReviewRecord> out;
  out.reserve(keep);
  for (std::size_t i : idx) out.push_back(data.records()[i]);
  return Dataset::from_records(std::move(out));
}

struct DatasetStats {
  std::size_t records = 0;
  std::array<std::size_t, kNumClasses> class_counts{};
  double mean_body_chars = 0.0;
};

inline DatasetStats dataset_stats(const Dataset& data) {
  DatasetStats s;
  s.records = data.size();
  s.class_counts = data.class_counts();
  if (data.empty()) return s;
  std::size_t total = 0;
  for (const auto& r : data.records()) total += utf8::length(r.body);
  s.mean_body_chars = static_cast<double>(total) / static_cast<double>(data.size());
  return s;
}

}  // namespace tokbench
