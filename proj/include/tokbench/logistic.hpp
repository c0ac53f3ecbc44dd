#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tokbench/corpus.hpp"
#include "tokbench/error.hpp"
#include "tokbench/lbfgs.hpp"
#include "tokbench/naive_bayes.hpp"
#include "tokbench/sparse.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

struct LrParams {
  double C = 10.0;  // multiplies the data term: larger C, weaker L2 penalty
  double tol = 1e-6;
  std::size_t max_iter = 200;
};

struct LrModel {
  std::vector<double> weights;
  double bias = 0.0;
  double C = 10.0;
  std::size_t iterations = 0;
  double grad_norm = 0.0;  // infinity norm at the returned point
  bool converged = false;  // false: max_iter or line search stopped the solver
  std::vector<double> objective_trace;

  std::size_t features() const noexcept { return weights.size(); }
};

/// +1 for positive, -1 for negative.
inline std::vector<int> signed_labels(const std::vector<Sentiment>& y) {
  std::vector<int> out;
  out.reserve(y.size());
  for (Sentiment s : y) out.push_back(s == Sentiment::positive ? 1 : -1);
  return out;
}

namespace detail {

// log(1 + exp(t)) without overflow
// Neumaier-compensated running sum. Near the optimum the line search compares
// objective values that differ by less than plain summation error.
struct CompensatedSum {
  double sum = 0.0, carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

inline double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace detail

struct ObjectiveGradient {
  double objective = 0.0;
  std::vector<double> gradient;  // d/dw (V entries) then d/db
};

/// J(w, b) = 1/2 |w|^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b))); the bias is
/// not penalized.
inline double lr_objective_into(std::span<const double> weights, double bias, const SparseMatrix& x,
                                std::span<const int> y, double C, std::span<double> grad) {
  const std::size_t v = weights.size();
  detail::CompensatedSum obj, data;
  for (std::size_t j = 0; j < v; ++j) {
    obj.add(0.5 * weights[j] * weights[j]);
    grad[j] = weights[j];
  }
  grad[v] = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double margin = y[r] * (x.dot_row(r, weights) + bias);
    data.add(detail::softplus(-margin));
    // d/dz of log(1 + exp(-y z)) = -y * sigmoid(-y z)
    const double coeff = -C * y[r] * detail::sigmoid(-margin);
    for (const auto& e : x.row(r)) grad[e.col] += coeff * e.value;
    grad[v] += coeff;
  }
  return obj.value() + C * data.value();
}

inline ObjectiveGradient lr_objective_gradient(std::span<const double> weights, double bias, const SparseMatrix& x,
                                               std::span<const int> y, double C) {
  if (weights.size() != x.cols() || y.size() != x.rows()) {
    fail(ErrorKind::invalid_argument, "logistic objective: dimension mismatch");
  }
  ObjectiveGradient out;
  out.gradient.assign(weights.size() + 1, 0.0);
  out.objective = lr_objective_into(weights, bias, x, y, C, out.gradient);
  return out;
}

inline LrModel lr_fit(const SparseMatrix& x, const std::vector<Sentiment>& labels, const LrParams& params = {}) {
  if (!(params.C > 0.0)) fail(ErrorKind::invalid_argument, "logistic regression C must be > 0");
  detail::require_labels(x, labels);
  const auto y = signed_labels(labels);
  const std::size_t v = x.cols();
  auto fn = [&](std::span<const double> p, std::span<double> grad) {
    return lr_objective_into(p.first(v), p[v], x, y, params.C, grad);
  };
  LbfgsOptions opt;
  opt.tol = params.tol;
  opt.max_iter = params.max_iter;
  auto res = lbfgs_minimize(fn, std::vector<double>(v + 1, 0.0), opt);
  LrModel m;
  m.bias = res.x[v];
  res.x.pop_back();
  m.weights = std::move(res.x);
  m.C = params.C;
  m.iterations = res.iterations;
  m.grad_norm = res.grad_inf_norm;
  m.converged = res.converged;
  m.objective_trace = std::move(res.trace);
  return m;
}

struct LrPrediction {
  std::vector<Sentiment> labels;
  std::vector<double> probability;  // P(positive)
};

/// p = sigmoid(w.x + b); positive iff p >= 0.5.
inline LrPrediction lr_predict(const LrModel& m, const SparseMatrix& x) {
  if (x.cols() != m.features()) {
    fail(ErrorKind::invalid_argument, "matrix has " + std::to_string(x.cols()) + " columns, model expects " +
                                          std::to_string(m.features()));
  }
  LrPrediction out;
  out.labels.reserve(x.rows());
  out.probability.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double p = detail::sigmoid(x.dot_row(r, m.weights) + m.bias);
    out.probability.push_back(p);
    out.labels.push_back(p >= 0.5 ? Sentiment::positive : Sentiment::negative);
  }
  return out;
}

inline std::string serialize_lr(const LrModel& m) {
  std::string out = "#lr v1\n";
  out += "C\t" + text::format_exact(m.C) + "\n";
  out += "bias\t" + text::format_exact(m.bias) + "\n";
  out += "iterations\t" + std::to_string(m.iterations) + "\n";
  out += "grad_norm\t" + text::format_exact(m.grad_norm) + "\n";
  out += std::string("converged\t") + (m.converged ? "1" : "0") + "\n";
  out += "features\t" + std::to_string(m.features()) + "\n";
  for (std::size_t j = 0; j < m.features(); ++j) {
    out += std::to_string(j) + "\t" + text::format_exact(m.weights[j]) + "\n";
  }
  return out;
}

inline LrModel parse_lr(std::string_view data) {
  const auto rows = text::lines(data);
  if (rows.size() < 7 || rows[0] != "#lr v1") fail(ErrorKind::parse, "lr model: missing '#lr v1' header");
  auto value = [&](std::size_t line, std::string_view key) {
    const auto cols = text::split(rows[line], '\t');
    if (cols.size() != 2 || cols[0] != key) {
      fail(ErrorKind::parse, "lr model line " + std::to_string(line + 1) + ": expected '" + std::string(key) + "'");
    }
    const auto v = text::parse_double(cols[1]);
    if (!v) fail(ErrorKind::parse, "lr model line " + std::to_string(line + 1) + ": bad number");
    return *v;
  };
  LrModel m;
  m.C = value(1, "C");
  m.bias = value(2, "bias");
  m.iterations = static_cast<std::size_t>(value(3, "iterations"));
  m.grad_norm = value(4, "grad_norm");
  m.converged = value(5, "converged") != 0.0;
  const auto v = static_cast<std::size_t>(value(6, "features"));
  m.weights.reserve(v);
  for (std::size_t i = 7; i < rows.size(); ++i) {
    if (rows[i].empty()) continue;
    const auto cols = text::split(rows[i], '\t');
    const auto w = cols.size() == 2 ? text::parse_double(cols[1]) : std::nullopt;
    if (!w || text::parse_int(cols[0]) != static_cast<std::int64_t>(m.weights.size())) {
      fail(ErrorKind::parse, "lr model line " + std::to_string(i + 1) + ": bad weight row");
    }
    m.weights.push_back(*w);
  }
  if (m.weights.size() != v) fail(ErrorKind::parse, "lr model: truncated");
  return m;
}

}  // namespace tokbench
