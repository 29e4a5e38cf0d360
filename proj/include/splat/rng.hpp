// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace splat {

// splitmix64 generator with fully specified int/real mappings.
// Standard-library distribution adapters are implementation-defined, so every
// draw that must be bit-reproducible across platforms goes through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi] inclusive. Fixed-point multiply keeps the mapping
  // platform-independent; the O(2^-64) modulo bias is irrelevant here.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ULL;
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * span;
    return lo + static_cast<std::int64_t>(wide >> 64);
  }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }

  // Standard normal via Box-Muller on two fixed draws.
  double next_normal();

 private:
  std::uint64_t state_;
};

}  // namespace splat
