// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

namespace provtrail {

// Deterministic random source. The underlying generator is mt19937_64, whose
// output stream is fully specified by the standard, and every derived draw
// below is computed with exact integer or IEEE arithmetic, so identical seeds
// produce identical decision sequences on every platform. Never swap in the
// platform default generator or std:: distributions; their mappings are
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform draw from [0, n). Rejection sampling keeps the mapping unbiased
  // and portable.
  size_t uniform_index(size_t n) {
    assert(n > 0);
    const uint64_t span = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x = next_u64();
    while (x >= limit) {
      x = next_u64();
    }
    return static_cast<size_t>(x % span);
  }

  // Draw an index with probability proportional to weights[i]. Weights must
  // be positive and finite. Left-to-right cumulative sums over doubles are
  // exact IEEE operations, so the draw is reproducible.
  size_t pick_weighted(const std::vector<double>& weights) {
    assert(!weights.empty());
    double total = 0.0;
    for (double w : weights) {
      assert(w > 0.0);
      total += w;
    }
    // Map a 53-bit draw onto [0, total).
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53 * total;
    double cumulative = 0.0;
    for (size_t i = 0; i + 1 < weights.size(); ++i) {
      cumulative += weights[i];
      if (u < cumulative) {
        return i;
      }
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace provtrail
