#pragma once

#include <cstdint>
#include <random>

namespace alife {

// Deterministic RNG wrapper. All draws go through explicit bounded helpers
// (never std::uniform_*_distribution, whose outputs vary across standard
// libraries), so a seed pins the byte content of every generated trace.
struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t next_u64() { return eng(); }

  // Uniform in [0, n); n > 0. Rejection sampling to kill modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = eng();
    while (v >= limit) v = eng();
    return v % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }

  bool chance(double p) { return unit() < p; }

  std::mt19937_64 eng;
};

}  // namespace alife
