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

#ifndef SEMIRES_SIS_HPP
#define SEMIRES_SIS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "semires/cost.hpp"
#include "semires/model.hpp"
#include "semires/particle_set.hpp"
#include "semires/rng.hpp"

namespace semires {

/// Sampling and weighting step of SIR.
/**
 * Draws x_t^i ~ q(. | x_{t-1}^i) for every slot and weights it by
 * w_{t-1}^i f g / q in log domain. The returned set keeps the raw
 * (unnormalized) log-weights so that it can seed a rejuvenated support.
 * Throws DegeneracyError (generation 0) if every weight is zero.
 */
template <StateSpaceModel Model>
WeightedParticleSet<typename Model::State> sis_step(const WeightedParticleSet<typename Model::State>& prev,
                                                    const Model& model, const typename Model::Observation& y,
                                                    RngStream& rng, CostLedger& cost) {
  using State = typename Model::State;
  const std::size_t n = prev.size();
  std::vector<State> particles;
  particles.reserve(n);
  std::vector<double> log_weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    particles.push_back(model.sample_proposal(prev.particle(i), rng));
    log_weights[i] = std::log(prev.weight(i)) + log_weight_increment(model, particles[i], prev.particle(i), y, cost);
  }
  cost.proposal_draws += n;
  return WeightedParticleSet<State>(std::move(particles), std::move(log_weights));
}

/// Initial weighted set: N prior draws weighted by the likelihood of `y0`.
template <StateSpaceModel Model>
WeightedParticleSet<typename Model::State> initial_step(std::size_t n, const Model& model,
                                                        const typename Model::Observation& y0, RngStream& rng,
                                                        CostLedger& cost) {
  using State = typename Model::State;
  std::vector<State> particles;
  particles.reserve(n);
  std::vector<double> log_weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    particles.push_back(model.sample_prior(rng));
    log_weights[i] = model.log_likelihood(particles[i], y0);
  }
  cost.proposal_draws += n;
  cost.density_evaluations += n;
  return WeightedParticleSet<State>(std::move(particles), std::move(log_weights));
}

}  // namespace semires

#endif
