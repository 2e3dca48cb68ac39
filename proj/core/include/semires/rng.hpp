// Copyright 2026 The semires Authors
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

#ifndef SEMIRES_RNG_HPP
#define SEMIRES_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace semires {

/// Replayable random stream.
/**
 * Every stochastic operation in the library takes an explicit `RngStream&`.
 * Two streams constructed from the same seed produce bit-identical sequences
 * given the same call sequence. Independent child streams are derived with
 * `substream(key)`, which hashes (seed, key) into a fresh seed without
 * touching the parent state, so work split across threads stays independent
 * of the schedule.
 */
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed);

  /// Child stream keyed by `key`. Pure function of (seed(), key).
  [[nodiscard]] RngStream substream(std::uint64_t key) const;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate.
  double normal();

  /// Uniform integer in [0, n). `n` must be positive.
  std::size_t uniform_index(std::size_t n);

  std::uint64_t next_u64() { return engine_(); }

  // UniformRandomBitGenerator
  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix64(std::uint64_t value) noexcept;

/// Seed for child `key` of a stream seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) noexcept;

}  // namespace semires

#endif
