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

#ifndef SEMIRES_PARTICLE_SET_HPP
#define SEMIRES_PARTICLE_SET_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "semires/errors.hpp"

namespace semires {

/// Normalized weights obtained from log-weights by max subtraction.
struct NormalizedWeights {
  std::vector<double> weights;
  double log_normalizer;  ///< log of the sum of exp(log_weights)
};

/// Normalizes log-domain weights.
/**
 * Throws DegeneracyError (tagged with `generation`) when every log-weight is
 * -inf, and ContractViolation on NaN or +inf entries.
 */
NormalizedWeights normalize_log_weights(std::span<const double> log_weights, std::size_t generation = 0);

/// Writes normalized weights into `out` (resized to match). Same errors as above.
double normalize_log_weights_into(std::span<const double> log_weights, std::vector<double>& out,
                                  std::size_t generation = 0);

/// N particles with log-domain weights.
/**
 * `log_weights()` are kept exactly as supplied (raw, unnormalized), since
 * partial support rejuvenation mixes old and new raw weights on a common
 * scale. `weights()` are the derived normalized weights, summing to one
 * within 1e-12. Particle order is significant: slot j is paired with the
 * previous-time particle j.
 */
template <class State>
class WeightedParticleSet {
 public:
  WeightedParticleSet(std::vector<State> particles, std::vector<double> log_weights)
      : particles_(std::move(particles)), log_weights_(std::move(log_weights)) {
    if (particles_.empty()) {
      throw ContractViolation("a particle set needs at least one particle");
    }
    if (particles_.size() != log_weights_.size()) {
      throw ContractViolation("particle and weight counts differ");
    }
    auto normalized = normalize_log_weights(log_weights_);
    weights_ = std::move(normalized.weights);
    log_normalizer_ = normalized.log_normalizer;
  }

  /// Equally weighted set; every weight is exactly 1/N.
  static WeightedParticleSet uniform(std::vector<State> particles) {
    std::vector<double> log_weights(particles.size(), 0.0);
    return WeightedParticleSet(std::move(particles), std::move(log_weights));
  }

  [[nodiscard]] std::size_t size() const noexcept { return particles_.size(); }
  [[nodiscard]] const std::vector<State>& particles() const noexcept { return particles_; }
  [[nodiscard]] const State& particle(std::size_t i) const { return particles_[i]; }
  [[nodiscard]] const std::vector<double>& log_weights() const noexcept { return log_weights_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] double log_normalizer() const noexcept { return log_normalizer_; }

  /// True when every normalized weight is bit-identical (i.e. 1/N).
  [[nodiscard]] bool is_uniform() const noexcept {
    for (double w : weights_) {
      if (w != weights_.front()) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<State> particles_;
  std::vector<double> log_weights_;
  std::vector<double> weights_;
  double log_normalizer_ = 0.0;
};

}  // namespace semires

#endif
