#pragma once

// Exponential-time reference computations used only by the tests. Nothing
// here shares code with the dynamic programs under test.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

/// Every way to cut a string of n characters, as lists of span lengths.
inline std::vector<std::vector<std::size_t>> compositions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  // bit i set = cut after character i
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
    std::vector<std::size_t> lens;
    std::size_t run = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (mask >> i & 1) {
        lens.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    lens.push_back(run);
    out.push_back(std::move(lens));
  }
  return out;
}

/// The tie order both decoders promise: fewer pieces first, then the span
/// length sequence that is lexicographically larger.
inline bool tie_prefers(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a > b;
}

struct CostResult {
  std::int64_t cost = 0;
  std::vector<std::size_t> lengths;
};

/// Minimum-cost segmentation under the unigram cost model with single
/// character unknown fallback.
inline CostResult min_cost(const std::u32string& text, const std::map<std::u32string, std::int64_t>& dict,
                           std::int64_t unknown_cost) {
  std::optional<CostResult> best;
  for (const auto& lens : compositions(text.size())) {
    std::int64_t cost = 0;
    bool ok = true;
    std::size_t pos = 0;
    for (std::size_t len : lens) {
      const auto piece = text.substr(pos, len);
      pos += len;
      if (auto it = dict.find(piece); it != dict.end()) {
        // a single character can always fall back to the unknown cost
        cost += len == 1 ? std::min(it->second, unknown_cost) : it->second;
      } else if (len == 1) {
        cost += unknown_cost;
      } else {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (!best || cost < best->cost || (cost == best->cost && tie_prefers(lens, best->lengths))) {
      best = CostResult{cost, lens};
    }
  }
  return *best;
}

struct ScoreResult {
  double score = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> lengths;
  bool found = false;
  double runner_up = -std::numeric_limits<double>::infinity();  // best score of any other segmentation
};

/// Maximum total log-probability segmentation. Scores are summed from the
/// last piece backwards so that equal-valued paths round identically to a
/// right-to-left dynamic program and ties stay exact.
inline ScoreResult max_score(const std::u32string& text, const std::map<std::u32string, double>& logp) {
  ScoreResult best;
  for (const auto& lens : compositions(text.size())) {
    std::vector<double> parts;
    bool ok = true;
    std::size_t pos = 0;
    for (std::size_t len : lens) {
      auto it = logp.find(text.substr(pos, len));
      pos += len;
      if (it == logp.end()) {
        ok = false;
        break;
      }
      parts.push_back(it->second);
    }
    if (!ok) continue;
    double score = 0.0;
    for (auto p = parts.rbegin(); p != parts.rend(); ++p) score = *p + score;
    if (!best.found || score > best.score || (score == best.score && tie_prefers(lens, best.lengths))) {
      const double previous = best.found ? best.score : best.runner_up;
      best = {score, lens, true, std::max(previous, best.runner_up)};
    } else {
      best.runner_up = std::max(best.runner_up, score);
    }
  }
  return best;
}

/// Marginal probability of text summed over every segmentation, and the
/// expected number of occurrences of each piece under the posterior.
struct Marginal {
  double probability = 0.0;
  std::map<std::u32string, double> expected;
};

inline Marginal marginal(const std::u32string& text, const std::map<std::u32string, double>& logp) {
  Marginal m;
  std::vector<std::pair<double, std::vector<std::u32string>>> segs;
  for (const auto& lens : compositions(text.size())) {
    double p = 1.0;
    std::vector<std::u32string> pieces;
    std::size_t pos = 0;
    bool ok = true;
    for (std::size_t len : lens) {
      auto piece = text.substr(pos, len);
      pos += len;
      auto it = logp.find(piece);
      if (it == logp.end()) {
        ok = false;
        break;
      }
      p *= std::exp(it->second);
      pieces.push_back(piece);
    }
    if (!ok) continue;
    m.probability += p;
    segs.emplace_back(p, std::move(pieces));
  }
  for (const auto& [p, pieces] : segs) {
    for (const auto& piece : pieces) m.expected[piece] += p / m.probability;
  }
  return m;
}

}  // namespace oracle
