#include <gtest/gtest.h>

#include <set>

#include "tokbench/cross_validation.hpp"
#include "tokbench/metrics.hpp"

using namespace tokbench;

namespace {

constexpr auto P = Sentiment::positive;
constexpr auto N = Sentiment::negative;

std::vector<Sentiment> labels(std::size_t pos, std::size_t neg) {
  std::vector<Sentiment> y(pos, P);
  y.insert(y.end(), neg, N);
  return y;
}

}  // namespace

TEST(Metrics, ErrorPercentage) {
  const std::vector<Sentiment> gold{P, N, P, N};
  const std::vector<Sentiment> pred{P, P, P, N};
  EXPECT_DOUBLE_EQ(evaluate_error(pred, gold), 25.0);
  EXPECT_DOUBLE_EQ(evaluate_error(gold, gold), 0.0);
  EXPECT_THROW(evaluate_error(pred, std::vector<Sentiment>{P}), Error);
  EXPECT_THROW(evaluate_error(std::vector<Sentiment>{}, std::vector<Sentiment>{}), Error);
}

TEST(Kfold, SeventyThirtyWithFiveFolds) {
  const auto y = labels(70, 30);
  const auto plan = repeated_stratified_kfold(y, 5, 1, 42);
  ASSERT_EQ(plan.folds.size(), 1u);
  ASSERT_EQ(plan.folds[0].size(), 5u);
  for (const auto& fold : plan.folds[0]) {
    std::size_t pos = 0;
    for (auto i : fold) pos += y[i] == P;
    EXPECT_EQ(pos, 14u);
    EXPECT_EQ(fold.size() - pos, 6u);
  }
}

TEST(Kfold, FoldsPartitionEveryRepeat) {
  for (std::size_t pos : {5u, 13u, 40u}) {
    for (std::size_t k : {2u, 3u, 5u}) {
      const auto y = labels(pos, 17);
      const auto plan = repeated_stratified_kfold(y, k, 3, 7);
      ASSERT_EQ(plan.folds.size(), 3u);
      for (const auto& repeat : plan.folds) {
        std::multiset<std::size_t> all;
        std::size_t lo = y.size(), hi = 0;
        for (const auto& f : repeat) {
          all.insert(f.begin(), f.end());
          lo = std::min(lo, f.size());
          hi = std::max(hi, f.size());
          EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
          // every class present in every fold and in every training split
          std::size_t p = 0;
          for (auto i : f) p += y[i] == P;
          EXPECT_GE(p, pos / k);
          EXPECT_LE(p, (pos + k - 1) / k);
        }
        EXPECT_LE(hi - lo, 1u);
        ASSERT_EQ(all.size(), y.size());
        std::size_t expect = 0;
        for (auto i : all) EXPECT_EQ(i, expect++);
      }
    }
  }
}

TEST(Kfold, DeterministicAndSeedSensitive) {
  const auto y = labels(30, 30);
  const auto a = repeated_stratified_kfold(y, 5, 3, 42);
  const auto b = repeated_stratified_kfold(y, 5, 3, 42);
  const auto c = repeated_stratified_kfold(y, 5, 3, 43);
  EXPECT_EQ(a.folds, b.folds);
  EXPECT_NE(a.folds, c.folds);
  EXPECT_NE(a.folds[0], a.folds[1]);
}

TEST(Kfold, TenSamplesSevenThree) {
  const auto y = labels(7, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto plan = repeated_stratified_kfold(y, 5, 2, seed);
    for (const auto& repeat : plan.folds) {
      std::vector<int> seen(10, 0);
      for (const auto& f : repeat) {
        std::size_t p = 0;
        for (auto i : f) {
          p += y[i] == P;
          ++seen[i];
        }
        EXPECT_TRUE(p == 1 || p == 2);
        EXPECT_LE(f.size() - p, 1u);
      }
      for (int s : seen) EXPECT_EQ(s, 1);
    }
  }
}

TEST(Kfold, Errors) {
  EXPECT_THROW(repeated_stratified_kfold(labels(4, 3), 5, 1, 1), Error);
  EXPECT_THROW(repeated_stratified_kfold(labels(10, 0), 2, 1, 1), Error);
  EXPECT_THROW(repeated_stratified_kfold(labels(10, 10), 1, 1, 1), Error);
  EXPECT_THROW(repeated_stratified_kfold(labels(10, 10), 2, 0, 1), Error);
  EXPECT_NO_THROW(repeated_stratified_kfold(labels(5, 5), 5, 1, 1));
  EXPECT_NO_THROW(repeated_stratified_kfold(labels(10, 4), 5, 1, 1));
}

TEST(Grid, Parse) {
  EXPECT_EQ(parse_c_grid("C=0.01,0.1,1"), (std::vector<double>{0.01, 0.1, 1.0}));
  EXPECT_EQ(parse_c_grid(" C=5 "), (std::vector<double>{5.0}));
  EXPECT_THROW(parse_c_grid("alpha=1"), Error);
  EXPECT_THROW(parse_c_grid("C=1,-2"), Error);
  EXPECT_THROW(parse_c_grid("C=1,x"), Error);
  EXPECT_EQ(default_c_grid().size(), 5u);
}

namespace {

// Perfectly separable on feature 0; every C gives zero error.
void separable(SparseMatrix& x, std::vector<Sentiment>& y) {
  x = SparseMatrix(2);
  for (int i = 0; i < 20; ++i) {
    const bool pos = i % 2 == 0;
    const std::vector<SparseEntry> row{{0, pos ? 1.0 + i * 0.01 : -1.0 - i * 0.01}, {1, 0.3}};
    x.push_row(row);
    y.push_back(pos ? P : N);
  }
}

}  // namespace

TEST(Grid, TieGoesToSmallerC) {
  SparseMatrix x(0);
  std::vector<Sentiment> y;
  separable(x, y);
  const auto plan = repeated_stratified_kfold(y, 5, 2, 42);
  const std::vector<LrParams> grid{{10.0, 1e-6, 200}, {0.5, 1e-6, 200}, {3.0, 1e-6, 200}};
  const auto r = grid_search(x, y, grid, plan);
  for (const auto& cell : r.cells) EXPECT_EQ(cell.mean_error, 0.0);
  EXPECT_EQ(r.best, 1u);
  EXPECT_EQ(r.best_params().C, 0.5);
  EXPECT_EQ(r.refit.C, 0.5);
}

TEST(Grid, SingletonGridMatchesDirectFit) {
  SparseMatrix x(0);
  std::vector<Sentiment> y;
  separable(x, y);
  const auto plan = repeated_stratified_kfold(y, 4, 1, 3);
  const auto r = grid_search(x, y, {{2.0, 1e-6, 200}}, plan);
  EXPECT_EQ(r.best, 0u);
  const auto direct = lr_fit(x, y, {2.0, 1e-6, 200});
  EXPECT_EQ(r.refit.weights, direct.weights);
  EXPECT_EQ(r.refit.bias, direct.bias);
  EXPECT_THROW(grid_search(x, y, {}, plan), Error);
}

TEST(Grid, MeanBookkeepingAndThreads) {
  Rng rng(9);
  SparseMatrix x(6);
  std::vector<Sentiment> y;
  for (int i = 0; i < 60; ++i) {
    std::vector<SparseEntry> row;
    for (std::uint32_t c = 0; c < 6; ++c) row.push_back({c, uniform_unit(rng) - 0.5});
    x.push_row(row);
    // noisy labels so errors differ across folds
    y.push_back(row[0].value + 0.4 * (uniform_unit(rng) - 0.5) > 0 ? P : N);
  }
  const auto plan = repeated_stratified_kfold(y, 5, 3, 42);
  std::vector<LrParams> grid;
  for (double c : default_c_grid()) grid.push_back({c, 1e-6, 200});
  const auto r = grid_search(x, y, grid, plan, 1);
  for (const auto& cell : r.cells) {
    ASSERT_EQ(cell.fold_errors.size(), 15u);
    double sum = 0;
    for (double e : cell.fold_errors) sum += e;
    EXPECT_DOUBLE_EQ(cell.mean_error, sum / 15.0);
    EXPECT_LE(r.cells[r.best].mean_error, cell.mean_error);
  }
  const auto r4 = grid_search(x, y, grid, plan, 4);
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_EQ(r.cells[g].fold_errors, r4.cells[g].fold_errors);
  EXPECT_EQ(r.best, r4.best);
  EXPECT_EQ(r.refit.weights, r4.refit.weights);
}
