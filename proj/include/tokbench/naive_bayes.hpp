#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tokbench/corpus.hpp"
#include "tokbench/error.hpp"
#include "tokbench/sparse.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

/// Multinomial naive Bayes with additive smoothing. Feature values need not
/// be integers: TF-IDF weights act as fractional counts.
struct MnbModel {
  double alpha = 1.0;
  std::array<double, kNumClasses> log_prior{};
  // log_likelihood[c][t] = log theta(t | c)
  std::array<std::vector<double>, kNumClasses> log_likelihood;

  std::size_t features() const noexcept { return log_likelihood[0].size(); }
};

struct ClassPrediction {
  std::vector<Sentiment> labels;
  // posterior[i][c]; rows sum to 1
  std::vector<std::array<double, kNumClasses>> posterior;
};

namespace detail {

inline void require_labels(const SparseMatrix& x, const std::vector<Sentiment>& y) {
  if (x.rows() != y.size()) {
    fail(ErrorKind::invalid_argument, "matrix has " + std::to_string(x.rows()) + " rows but " +
                                          std::to_string(y.size()) + " labels were given");
  }
  std::array<std::size_t, kNumClasses> counts{};
  for (Sentiment s : y) ++counts[class_index(s)];
  for (std::size_t c : counts) {
    if (c == 0) fail(ErrorKind::invalid_argument, "both classes must be present in the training labels");
  }
}

}  // namespace detail

inline MnbModel mnb_fit(const SparseMatrix& x, const std::vector<Sentiment>& y, double alpha = 1.0) {
  if (!(alpha > 0.0)) fail(ErrorKind::invalid_argument, "naive Bayes alpha must be > 0");
  detail::require_labels(x, y);
  const std::size_t v = x.cols();
  MnbModel m;
  m.alpha = alpha;
  std::array<std::size_t, kNumClasses> class_rows{};
  std::array<std::vector<double>, kNumClasses> feature_sum;
  for (auto& f : feature_sum) f.assign(v, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const std::size_t c = class_index(y[r]);
    ++class_rows[c];
    for (const auto& e : x.row(r)) feature_sum[c][e.col] += e.value;
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.log_prior[c] = std::log(static_cast<double>(class_rows[c]) / static_cast<double>(y.size()));
    double total = 0.0;
    for (double f : feature_sum[c]) total += f;
    const double log_denom = std::log(total + alpha * static_cast<double>(v));
    m.log_likelihood[c].resize(v);
    for (std::size_t t = 0; t < v; ++t) m.log_likelihood[c][t] = std::log(feature_sum[c][t] + alpha) - log_denom;
  }
  return m;
}

/// Joint log scores log P(c) + sum_t x_t log theta(t|c).
inline std::array<double, kNumClasses> mnb_scores(const MnbModel& m, std::span<const SparseEntry> row) {
  std::array<double, kNumClasses> s = m.log_prior;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (const auto& e : row) s[c] += e.value * m.log_likelihood[c][e.col];
  }
  return s;
}

inline ClassPrediction mnb_predict(const MnbModel& m, const SparseMatrix& x) {
  if (x.cols() != m.features()) {
    fail(ErrorKind::invalid_argument, "matrix has " + std::to_string(x.cols()) + " columns, model expects " +
                                          std::to_string(m.features()));
  }
  ClassPrediction out;
  out.labels.reserve(x.rows());
  out.posterior.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto s = mnb_scores(m, x.row(r));
    const double top = std::max(s[0], s[1]);
    const double e0 = std::exp(s[0] - top);
    const double e1 = std::exp(s[1] - top);
    out.posterior.push_back({e0 / (e0 + e1), e1 / (e0 + e1)});
    // Ties go to the positive class, as for logistic regression.
    out.labels.push_back(s[1] >= s[0] ? Sentiment::positive : Sentiment::negative);
  }
  return out;
}

/// `#mnb v1`, then `alpha`, `prior` rows and one `<col> <log theta neg> <log
/// theta pos>` row per feature.
inline std::string serialize_mnb(const MnbModel& m) {
  std::string out = "#mnb v1\n";
  out += "alpha\t" + text::format_exact(m.alpha) + "\n";
  out += "features\t" + std::to_string(m.features()) + "\n";
  out += "prior\t" + text::format_exact(m.log_prior[0]) + "\t" + text::format_exact(m.log_prior[1]) + "\n";
  for (std::size_t t = 0; t < m.features(); ++t) {
    out += std::to_string(t) + "\t" + text::format_exact(m.log_likelihood[0][t]) + "\t" +
           text::format_exact(m.log_likelihood[1][t]) + "\n";
  }
  return out;
}

inline MnbModel parse_mnb(std::string_view data) {
  const auto rows = text::lines(data);
  if (rows.size() < 4 || rows[0] != "#mnb v1") fail(ErrorKind::parse, "mnb model: missing '#mnb v1' header");
  MnbModel m;
  auto field = [&](std::size_t line, std::string_view key, std::size_t ncols) {
    auto cols = text::split(rows[line], '\t');
    if (cols.size() != ncols || cols[0] != key) {
      fail(ErrorKind::parse, "mnb model line " + std::to_string(line + 1) + ": expected '" + std::string(key) + "'");
    }
    return cols;
  };
  auto num = [](std::string_view s) {
    const auto v = text::parse_double(s);
    if (!v) fail(ErrorKind::parse, "mnb model: bad number '" + std::string(s) + "'");
    return *v;
  };
  m.alpha = num(field(1, "alpha", 2)[1]);
  const auto v = text::parse_int(field(2, "features", 2)[1]);
  if (!v || *v < 0) fail(ErrorKind::parse, "mnb model: bad feature count");
  const auto prior = field(3, "prior", 3);
  m.log_prior = {num(prior[1]), num(prior[2])};
  for (auto& ll : m.log_likelihood) ll.reserve(static_cast<std::size_t>(*v));
  for (std::size_t i = 4; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto cols = text::split(rows[i], '\t');
    if (cols.size() != 3 || text::parse_int(cols[0]) != static_cast<std::int64_t>(m.log_likelihood[0].size())) {
      fail(ErrorKind::parse, "mnb model line " + std::to_string(i + 1) + ": bad feature row");
    }
    m.log_likelihood[0].push_back(num(cols[1]));
    m.log_likelihood[1].push_back(num(cols[2]));
  }
  if (m.log_likelihood[0].size() != static_cast<std::size_t>(*v)) fail(ErrorKind::parse, "mnb model: truncated");
  return m;
}

}  // namespace tokbench
