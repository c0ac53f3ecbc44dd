#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tokbench/corpus.hpp"
#include "tokbench/error.hpp"

namespace tokbench {

/// 100 * mismatches / total.
inline double evaluate_error(std::span<const Sentiment> predicted, std::span<const Sentiment> gold) {
  if (predicted.size() != gold.size()) fail(ErrorKind::invalid_argument, "prediction and gold lengths differ");
  if (gold.empty()) fail(ErrorKind::invalid_argument, "cannot compute an error rate over zero items");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) wrong += predicted[i] != gold[i];
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(gold.size());
}

}  // namespace tokbench
