#pragma once

#include <algorithm>
#include <cmath>
#include <ctime>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tokbench/config.hpp"
#include "tokbench/error.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

struct EvalReport {
  std::string tokenizer;   // display name, e.g. "SP"
  std::string classifier;  // display name, e.g. "LR" or "LR-tuned"
  double error_train = 0.0;
  std::optional<double> error_test;  // absent when no test set was given
  double vectorize_seconds = 0.0;    // tokenize + fit + transform of the training set
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::string timestamp;
};

/// Field-by-field equality that ignores the timestamp and the wall-clock
/// vectorization time.
inline bool same_outcome(const EvalReport& a, const EvalReport& b) {
  return a.tokenizer == b.tokenizer && a.classifier == b.classifier && a.error_train == b.error_train &&
         a.error_test == b.error_test && a.n_train == b.n_train && a.n_test == b.n_test && a.config == b.config;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

enum class ReportFormat { text, csv };

/// Text: aligned Tokenizer | Classifier | Error-Train | Error-Test |
/// Vectorize-s columns, errors with 2 decimals. CSV: same columns, quoted
/// where needed.
inline std::string emit_report(const std::vector<EvalReport>& reports, ReportFormat format) {
  if (reports.empty()) fail(ErrorKind::invalid_argument, "no reports to emit");
  const std::vector<std::string> header{"Tokenizer", "Classifier", "Error-Train", "Error-Test", "Vectorize-s"};
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& r : reports) {
    rows.push_back({r.tokenizer, r.classifier, text::format_fixed(r.error_train, 2),
                    r.error_test ? text::format_fixed(*r.error_test, 2) : "-",
                    text::format_fixed(r.vectorize_seconds, 2)});
  }
  std::string out;
  if (format == ReportFormat::csv) {
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out.push_back(',');
        if (row[c].find_first_of(",\"\r\n") != std::string::npos) {
          out.push_back('"');
          for (char ch : row[c]) {
            if (ch == '"') out.push_back('"');
            out.push_back(ch);
          }
          out.push_back('"');
        } else {
          out += row[c];
        }
      }
      out += "\r\n";
    }
    return out;
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      // Text columns left-aligned, numbers right-aligned.
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c < 2 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

/// Full report as key=value lines (the same format as pipeline configs).
inline std::string serialize_report(const EvalReport& r) {
  KeyValueConfig kv;
  kv.set("tokenizer", r.tokenizer);
  kv.set("classifier", r.classifier);
  kv.set("error_train", text::format_exact(r.error_train));
  kv.set("error_test", r.error_test ? text::format_exact(*r.error_test) : "");
  kv.set("vectorize_seconds", text::format_exact(r.vectorize_seconds));
  kv.set("n_train", std::to_string(r.n_train));
  kv.set("n_test", std::to_string(r.n_test));
  kv.set("timestamp", r.timestamp);
  for (const auto& [k, v] : r.config) kv.set("config." + k, v);
  return kv.serialize();
}

inline EvalReport parse_report(std::string_view data) {
  const auto kv = KeyValueConfig::parse(data);
  auto get = [&](std::string_view key) -> std::string {
    const auto* v = kv.find(key);
    if (!v) fail(ErrorKind::parse, "report lacks '" + std::string(key) + "'");
    return *v;
  };
  auto num = [&](std::string_view key) {
    const auto v = text::parse_double(get(key));
    if (!v) fail(ErrorKind::parse, "report: bad number for '" + std::string(key) + "'");
    return *v;
  };
  EvalReport r;
  r.tokenizer = get("tokenizer");
  r.classifier = get("classifier");
  r.error_train = num("error_train");
  if (!get("error_test").empty()) r.error_test = num("error_test");
  r.vectorize_seconds = num("vectorize_seconds");
  r.n_train = static_cast<std::size_t>(num("n_train"));
  r.n_test = static_cast<std::size_t>(num("n_test"));
  r.timestamp = get("timestamp");
  for (const auto& [k, v] : kv.entries()) {
    if (k.rfind("config.", 0) == 0) r.config.emplace_back(k.substr(7), v);
  }
  return r;
}

}  // namespace tokbench
