#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace tokbench {

/// The project-wide PRNG. std::mt19937_64 has a bit-exact output sequence
/// mandated by the standard; the distributions below are hand-written because
/// the std:: distributions are implementation-defined.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Draws below `threshold` would bias the modulo; 2^64 - threshold is a
  // multiple of bound.
  const std::uint64_t threshold = (std::uint64_t(0) - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

/// Uniform real in [0, 1) with 53 bits of randomness.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace tokbench
