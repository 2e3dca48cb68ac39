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

#ifndef SEMIRES_DISCRETE_HMM_HPP
#define SEMIRES_DISCRETE_HMM_HPP

#include <cstddef>
#include <vector>

#include "semires/particle_set.hpp"
#include "semires/rng.hpp"

namespace semires::oracle {

/// One filtering step of a finite-state HMM, small enough to enumerate.
/**
 * Holds the previous weighted particles (states and normalized weights),
 * the tables f(s' | s) and q(s' | s), and g(y | s') for a fixed observation y.
 */
struct DiscreteHMM {
  std::size_t num_states = 0;
  std::vector<int> ancestor_states;
  std::vector<double> ancestor_weights;
  std::vector<std::vector<double>> transition;  ///< transition[s][s'] = f(s' | s)
  std::vector<std::vector<double>> proposal;    ///< proposal[s][s'] = q(s' | s)
  std::vector<double> likelihood;               ///< likelihood[s'] = g(y | s')

  [[nodiscard]] std::size_t particle_count() const noexcept { return ancestor_states.size(); }

  /// Throws ConfigError on malformed tables or a proposal that misses target mass.
  void validate() const;

  /// Unnormalized importance weight of value `value` in slot `slot`: w_j f g / q.
  [[nodiscard]] double raw_weight(std::size_t slot, int value) const;

  /// Previous particle set as a weighted set.
  [[nodiscard]] WeightedParticleSet<int> previous_set() const;

  /// Same model with the largest and smallest likelihood entries swapped (negative control).
  [[nodiscard]] DiscreteHMM with_swapped_likelihood_extremes() const;

  /// Random instance with strictly positive tables.
  static DiscreteHMM random(std::size_t num_states, std::size_t particles, RngStream& rng);
};

/// Observation placeholder; the likelihood table already fixes y.
struct FixedObservation {};

/// StateSpaceModel adapter over a DiscreteHMM. The prior is uniform over states.
class DiscreteHmmModel {
 public:
  using State = int;
  using Observation = FixedObservation;

  explicit DiscreteHmmModel(const DiscreteHMM& hmm) : hmm_(hmm) {}

  [[nodiscard]] int sample_prior(RngStream& rng) const;
  [[nodiscard]] int sample_proposal(int prev, RngStream& rng) const;
  [[nodiscard]] double log_transition(int x, int prev) const;
  [[nodiscard]] double log_likelihood(int x, FixedObservation) const;
  [[nodiscard]] double log_proposal(int x, int prev) const;

 private:
  const DiscreteHMM& hmm_;
};

}  // namespace semires::oracle

#endif
