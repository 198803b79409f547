#pragma once

#include <cstdint>

#include "bmt/normal.hpp"

namespace bmt {

// Counter-based generator: output i is a bijective mix of (key + i*gamma),
// i.e. a splitmix64 stream. A stream is fully determined by its key, so
// Monte Carlo replications can each own an independent stream regardless of
// which worker thread runs them. Normal draws go through the library's own
// inverse CDF, keeping every draw reproducible down to the bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key = 0) : state_(mix(key + 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Strictly inside (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform()); }

  // Stream key for (seed, a, b), e.g. (master seed, design index, rep index).
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a = 0,
                                  std::uint64_t b = 0) {
    std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ull);
    k = mix(k ^ (a + 0xbf58476d1ce4e5b9ull));
    k = mix(k ^ (b + 0x94d049bb133111ebull));
    return k;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace bmt
