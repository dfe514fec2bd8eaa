// Copyright 2026 The AIGV Bench Authors.
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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace aigv {

// xoshiro256** (Blackman & Vigna), state expanded from a 64-bit seed with
// splitmix64. This is the only source of randomness in the library; every
// sampler, shuffle and initializer draws from it so that results are
// reproducible across platforms and standard libraries. Distribution helpers
// are implemented here rather than taken from <random>, whose distributions
// are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound), bound > 0. Unbiased (Lemire's method).
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  // Derives an independent stream, e.g. one per clip.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Fisher-Yates over the whole range.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(items[i - 1], items[j]);
  }
}

// Partial Fisher-Yates: after the call items[0..k) is a uniform sample
// without replacement, in draw order.
template <typename T>
void partial_shuffle(std::span<T> items, std::size_t k, Rng& rng) {
  const std::size_t n = items.size();
  for (std::size_t i = 0; i < k && i < n; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(items[i], items[j]);
  }
}

}  // namespace aigv
