// Copyright 2026 The spu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace spu {

/// SplitMix64 finalizer; used only to derive substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded random source addressed by a master seed plus a key path such as
/// (run, pair, chain, purpose). Two streams with the same seed and key path
/// produce identical draws no matter which thread owns them or when they are
/// created, which keeps parallel runs bitwise reproducible.
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}

  explicit RandomStream(std::uint64_t master_seed, std::span<const std::uint64_t> key = {})
      : master_seed_(master_seed), key_(key.begin(), key.end()) {
    engine_.seed(derive_seed());
  }

  RandomStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> key)
      : RandomStream(master_seed, std::span<const std::uint64_t>(key.begin(), key.size())) {}

  /// Child stream whose key path is this path extended by `keys`.
  RandomStream substream(std::initializer_list<std::uint64_t> keys) const {
    std::vector<std::uint64_t> child = key_;
    child.insert(child.end(), keys.begin(), keys.end());
    return RandomStream(master_seed_, child);
  }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  const std::vector<std::uint64_t>& key() const noexcept { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) built from the top 53 bits, so the value does
  /// not depend on the standard library's distribution implementation.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  /// Standard normal via Box-Muller (no cached second value, so draws stay
  /// aligned with the call sequence).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
  }

  /// Index drawn with probability weights[i] / sum(weights).
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) return i;
    }
    // Rounding can leave r marginally non-negative; fall back to the last
    // index with positive weight.
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return i;
    }
    return 0;
  }

 private:
  std::uint64_t derive_seed() const {
    std::uint64_t h = mix64(master_seed_);
    for (std::uint64_t k : key_) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    return h;
  }

  std::uint64_t master_seed_;
  std::vector<std::uint64_t> key_;
  std::mt19937_64 engine_;
};

}  // namespace spu
