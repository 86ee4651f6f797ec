// Copyright 2026 the qrs authors. Licensed
// under the Apache License, Version 2.0. See the LICENSE file at the root
// of this distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "qrs/errors.hpp"

namespace qrs {

// SplitMix64 finalizer (Stafford variant 13, as used by SplittableRandom).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Splittable counter-based generator in the SplittableRandom lineage.
//
// Stream derivation rule (relied on for reproducibility, do not change):
//   - a stream is identified by its 64-bit seed;
//   - output i of stream s is  mix64(s + (i+1)*GAMMA);
//   - substream j of stream s has seed  mix64(s ^ mix64((j+1)*GAMMA2)).
// Substream seeds depend only on the parent seed, never on how much of the
// parent stream has been consumed, so trials/rounds can run in any order
// (or in parallel) and still see identical randomness.
class SplitRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  static constexpr std::uint64_t kGamma2 = 0xd1342543de82ef95ull;

  explicit SplitRng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  SplitRng substream(std::uint64_t index) const {
    return SplitRng(mix64(seed_ ^ mix64((index + 1) * kGamma2)));
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix64(state_);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Unbiased integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw parameter_error("uniform_below: n must be positive");
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = static_cast<std::uint64_t>(-n) % n;
      while (lo < threshold) {
        m = static_cast<__uint128_t>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Deterministic Fisher-Yates; std::shuffle's draw sequence is unspecified
  // by the standard, so we keep our own.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace qrs
