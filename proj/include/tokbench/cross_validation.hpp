#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tokbench/corpus.hpp"
#include "tokbench/error.hpp"
#include "tokbench/logistic.hpp"
#include "tokbench/metrics.hpp"
#include "tokbench/parallel.hpp"
#include "tokbench/random.hpp"
#include "tokbench/sparse.hpp"
#include "tokbench/text_io.hpp"

namespace tokbench {

/// folds[repeat][fold] holds ascending row indices; within one repeat the
/// folds partition 0..n-1.
struct CvPlan {
  std::size_t k = 0;
  std::size_t repeats = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::vector<std::size_t>>> folds;
};

/// Per repeat, each class's members are shuffled and dealt round-robin over
/// the folds; the deal continues where the previous class stopped so fold
/// sizes stay balanced too.
inline CvPlan repeated_stratified_kfold(const std::vector<Sentiment>& y, std::size_t k, std::size_t repeats,
                                        std::uint64_t seed) {
  if (k < 2) fail(ErrorKind::invalid_argument, "k must be at least 2");
  if (repeats == 0) fail(ErrorKind::invalid_argument, "repeats must be at least 1");
  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < y.size(); ++i) members[class_index(y[i])].push_back(i);
  // A class smaller than k leaves some folds without it; only when every
  // class is smaller than k (or one is missing) is there nothing to stratify.
  std::size_t largest = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (members[c].empty()) {
      fail(ErrorKind::invalid_argument, std::string("class ") + to_string(static_cast<Sentiment>(c)) + " has no members");
    }
    largest = std::max(largest, members[c].size());
  }
  if (largest < k) {
    fail(ErrorKind::invalid_argument,
         "every class has fewer than k=" + std::to_string(k) + " members (largest has " + std::to_string(largest) + ")");
  }
  CvPlan plan{k, repeats, seed, {}};
  Rng rng(seed);
  for (std::size_t r = 0; r < repeats; ++r) {
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t next = 0;
    for (auto group : members) {
      shuffle(std::span<std::size_t>(group), rng);
      for (std::size_t idx : group) {
        folds[next].push_back(idx);
        next = (next + 1) % k;
      }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    plan.folds.push_back(std::move(folds));
  }
  return plan;
}

/// Parses "C=0.01,0.1,1" into values of C.
inline std::vector<double> parse_c_grid(std::string_view grid) {
  grid = text::trim(grid);
  if (grid.rfind("C=", 0) != 0) fail(ErrorKind::config, "grid must look like 'C=0.01,0.1,1'");
  std::vector<double> out;
  for (auto item : text::split(grid.substr(2), ',')) {
    const auto v = text::parse_double(text::trim(item));
    if (!v || !(*v > 0.0)) fail(ErrorKind::config, "bad C value '" + std::string(item) + "' in grid");
    out.push_back(*v);
  }
  return out;
}

inline const std::vector<double>& default_c_grid() {
  static const std::vector<double> grid{0.01, 0.1, 1.0, 10.0, 100.0};
  return grid;
}

struct GridCell {
  LrParams params;
  std::vector<double> fold_errors;  // repeat-major: repeat r, fold f at r*k + f
  double mean_error = 0.0;
};

struct GridSearchResult {
  std::vector<GridCell> cells;  // in grid order
  std::size_t best = 0;
  LrModel refit;  // trained on all rows with the best parameters

  const LrParams& best_params() const { return cells[best].params; }
};

/// Mean held-out error percentage per grid point over every fold of every
/// repeat; best is the lowest mean, ties to the smaller C.
inline GridSearchResult grid_search(const SparseMatrix& x, const std::vector<Sentiment>& y,
                                    const std::vector<LrParams>& grid, const CvPlan& plan, unsigned threads = 1) {
  if (grid.empty()) fail(ErrorKind::invalid_argument, "grid search needs at least one parameter combination");
  if (x.rows() != y.size()) fail(ErrorKind::invalid_argument, "grid search: rows and labels differ");
  struct Split {
    std::vector<std::size_t> train, test;
  };
  std::vector<Split> splits;
  for (const auto& repeat : plan.folds) {
    for (std::size_t f = 0; f < repeat.size(); ++f) {
      Split s;
      s.test = repeat[f];
      for (std::size_t g = 0; g < repeat.size(); ++g) {
        if (g != f) s.train.insert(s.train.end(), repeat[g].begin(), repeat[g].end());
      }
      std::sort(s.train.begin(), s.train.end());
      splits.push_back(std::move(s));
    }
  }

  GridSearchResult result;
  result.cells.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    result.cells[g].params = grid[g];
    result.cells[g].fold_errors.assign(splits.size(), 0.0);
  }
  auto subset = [&](const std::vector<std::size_t>& idx) {
    std::vector<Sentiment> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(y[i]);
    return out;
  };
  parallel_for(grid.size() * splits.size(), threads, [&](std::size_t job) {
    const std::size_t g = job / splits.size();
    const Split& s = splits[job % splits.size()];
    const auto model = lr_fit(x.select_rows(s.train), subset(s.train), grid[g]);
    const auto pred = lr_predict(model, x.select_rows(s.test));
    const auto gold = subset(s.test);
    result.cells[g].fold_errors[job % splits.size()] = evaluate_error(pred.labels, gold);
  });

  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto& cell = result.cells[g];
    double sum = 0.0;
    for (double e : cell.fold_errors) sum += e;
    cell.mean_error = cell.fold_errors.empty() ? 0.0 : sum / static_cast<double>(cell.fold_errors.size());
    const auto& best = result.cells[result.best];
    if (cell.mean_error < best.mean_error ||
        (cell.mean_error == best.mean_error && cell.params.C < best.params.C)) {
      result.best = g;
    }
  }
  result.refit = lr_fit(x, y, result.best_params());
  return result;
}

}  // namespace tokbench
