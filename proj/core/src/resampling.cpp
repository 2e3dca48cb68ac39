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

#include "semires/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace semires {

std::string ResamplingScheme::name() const {
  switch (kind_) {
    case SchemeKind::kMultinomial:
      return "SIR";
    case SchemeKind::kIndependent:
      return "I-SIR";
    case SchemeKind::kSemiIndependent:
      return "SR";
    case SchemeKind::kNonSequential:
      return "NSSR";
    case SchemeKind::kResampleMove:
      return "RM";
  }
  return "?";
}

void ResamplingScheme::validate(std::size_t n) const {
  if (n == 0) {
    throw std::invalid_argument("resampling needs at least one particle");
  }
  if ((kind_ == SchemeKind::kSemiIndependent || kind_ == SchemeKind::kNonSequential) && k_ > n) {
    throw std::invalid_argument(name() + ": k=" + std::to_string(k_) + " outside [0, N=" + std::to_string(n) + "]");
  }
}

std::uint64_t ResamplingScheme::proposal_draws_per_step(std::size_t n) const {
  const std::uint64_t big_n = n;
  switch (kind_) {
    case SchemeKind::kMultinomial:
      return big_n;
    case SchemeKind::kIndependent:
      return big_n * big_n;
    case SchemeKind::kSemiIndependent:
    case SchemeKind::kNonSequential:
      return big_n + (big_n - 1) * k_;
    case SchemeKind::kResampleMove:
      return big_n + big_n * k_;
  }
  return 0;
}

std::size_t categorical_draw(std::span<const double> weights, RngStream& rng) {
  double total = 0.0;
  for (double w : weights) {
    total += w;
  }
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      cumulative += weights[i];
      last_positive = i;
      if (u < cumulative) {
        return i;
      }
    }
  }
  return last_positive;
}

std::vector<std::size_t> draw_index_subset(std::size_t n, std::size_t k, RngStream& rng) {
  if (k > n) {
    throw std::invalid_argument("cannot draw " + std::to_string(k) + " distinct indices out of " + std::to_string(n));
  }
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t pick = j + rng.uniform_index(n - j);
    std::swap(pool[j], pool[pick]);
  }
  pool.resize(k);
  return pool;
}

double mh_acceptance_probability(double current_log_target, double proposed_log_target) {
  if (proposed_log_target == current_log_target) {
    return 1.0;
  }
  const double log_ratio = proposed_log_target - current_log_target;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

std::size_t count_distinct(std::vector<std::uint64_t> keys) {
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace semires
