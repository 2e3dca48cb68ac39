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

#include "semires/discrete_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semires/errors.hpp"
#include "semires/resampling.hpp"

namespace semires::oracle {

namespace {

void check_row(const std::vector<double>& row, std::size_t num_states, const char* table) {
  if (row.size() != num_states) {
    throw ConfigError(std::string(table) + " row has the wrong length");
  }
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ConfigError(std::string(table) + " entries must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError(std::string(table) + " row does not sum to one");
  }
}

double log_or_minus_inf(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

std::vector<double> random_simplex(std::size_t size, RngStream& rng) {
  std::vector<double> row(size);
  double sum = 0.0;
  for (double& p : row) {
    p = 0.1 + rng.uniform();
    sum += p;
  }
  for (double& p : row) {
    p /= sum;
  }
  return row;
}

}  // namespace

void DiscreteHMM::validate() const {
  if (num_states == 0) {
    throw ConfigError("discrete HMM needs at least one state");
  }
  if (ancestor_states.empty() || ancestor_states.size() != ancestor_weights.size()) {
    throw ConfigError("ancestor states and weights must be non-empty and of equal length");
  }
  for (int s : ancestor_states) {
    if (s < 0 || static_cast<std::size_t>(s) >= num_states) {
      throw ConfigError("ancestor state outside the alphabet");
    }
  }
  check_row(ancestor_weights, ancestor_weights.size(), "ancestor weight");
  if (transition.size() != num_states || proposal.size() != num_states || likelihood.size() != num_states) {
    throw ConfigError("tables must have one row per state");
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    check_row(transition[s], num_states, "transition");
    check_row(proposal[s], num_states, "proposal");
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    if (!(likelihood[s] >= 0.0) || !std::isfinite(likelihood[s])) {
      throw ConfigError("likelihood entries must be finite and non-negative");
    }
    for (std::size_t to = 0; to < num_states; ++to) {
      if (proposal[s][to] == 0.0 && transition[s][to] * likelihood[to] > 0.0) {
        throw ConfigError("proposal does not dominate the target");
      }
    }
  }
}

double DiscreteHMM::raw_weight(std::size_t slot, int value) const {
  const auto a = static_cast<std::size_t>(ancestor_states[slot]);
  const auto v = static_cast<std::size_t>(value);
  if (proposal[a][v] == 0.0) {
    return 0.0;
  }
  return ancestor_weights[slot] * transition[a][v] * likelihood[v] / proposal[a][v];
}

WeightedParticleSet<int> DiscreteHMM::previous_set() const {
  std::vector<double> log_weights(ancestor_weights.size());
  std::transform(ancestor_weights.begin(), ancestor_weights.end(), log_weights.begin(), log_or_minus_inf);
  return WeightedParticleSet<int>(ancestor_states, std::move(log_weights));
}

DiscreteHMM DiscreteHMM::with_swapped_likelihood_extremes() const {
  DiscreteHMM mutated = *this;
  const auto [lo, hi] = std::minmax_element(mutated.likelihood.begin(), mutated.likelihood.end());
  std::iter_swap(lo, hi);
  return mutated;
}

DiscreteHMM DiscreteHMM::random(std::size_t num_states, std::size_t particles, RngStream& rng) {
  DiscreteHMM hmm;
  hmm.num_states = num_states;
  for (std::size_t j = 0; j < particles; ++j) {
    hmm.ancestor_states.push_back(static_cast<int>(rng.uniform_index(num_states)));
  }
  hmm.ancestor_weights = random_simplex(particles, rng);
  for (std::size_t s = 0; s < num_states; ++s) {
    hmm.transition.push_back(random_simplex(num_states, rng));
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    hmm.proposal.push_back(random_simplex(num_states, rng));
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    hmm.likelihood.push_back(0.05 + 0.95 * rng.uniform());
  }
  hmm.validate();
  return hmm;
}

int DiscreteHmmModel::sample_prior(RngStream& rng) const {
  return static_cast<int>(rng.uniform_index(hmm_.num_states));
}

int DiscreteHmmModel::sample_proposal(int prev, RngStream& rng) const {
  return static_cast<int>(categorical_draw(hmm_.proposal[static_cast<std::size_t>(prev)], rng));
}

double DiscreteHmmModel::log_transition(int x, int prev) const {
  return log_or_minus_inf(hmm_.transition[static_cast<std::size_t>(prev)][static_cast<std::size_t>(x)]);
}

double DiscreteHmmModel::log_likelihood(int x, FixedObservation) const {
  return log_or_minus_inf(hmm_.likelihood[static_cast<std::size_t>(x)]);
}

double DiscreteHmmModel::log_proposal(int x, int prev) const {
  return log_or_minus_inf(hmm_.proposal[static_cast<std::size_t>(prev)][static_cast<std::size_t>(x)]);
}

}  // namespace semires::oracle
