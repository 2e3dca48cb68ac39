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

#ifndef SEMIRES_MODEL_HPP
#define SEMIRES_MODEL_HPP

#include <cmath>
#include <concepts>
#include <limits>

#include "semires/cost.hpp"
#include "semires/rng.hpp"

namespace semires {

/// State-space model contract.
/**
 * A model exposes the prior sampler, the transition density f, the
 * likelihood g of an observation, and an importance proposal q(x | x_prev)
 * with its sampler. Densities are returned in log domain; -inf denotes zero.
 * The proposal must dominate the target: q(x | x_prev) = 0 implies
 * f(x | x_prev) g(y | x) = 0.
 *
 * Models whose proposal equals the transition may declare
 * `static constexpr bool kBootstrapProposal = true;` in which case the
 * f/q ratio is taken as exactly one and only the likelihood is evaluated.
 */
template <class Model>
concept StateSpaceModel = requires(const Model& model, const typename Model::State& x,
                                   const typename Model::Observation& y, RngStream& rng) {
  typename Model::State;
  typename Model::Observation;
  { model.sample_prior(rng) } -> std::convertible_to<typename Model::State>;
  { model.sample_proposal(x, rng) } -> std::convertible_to<typename Model::State>;
  { model.log_transition(x, x) } -> std::convertible_to<double>;
  { model.log_likelihood(x, y) } -> std::convertible_to<double>;
  { model.log_proposal(x, x) } -> std::convertible_to<double>;
};

template <class Model>
inline constexpr bool is_bootstrap_model_v = requires {
  requires Model::kBootstrapProposal;
};

/// log[f(x | x_prev) g(y | x) / q(x | x_prev)], the importance weight increment.
template <StateSpaceModel Model>
double log_weight_increment(const Model& model, const typename Model::State& x,
                            const typename Model::State& x_prev, const typename Model::Observation& y,
                            CostLedger& cost) {
  if constexpr (is_bootstrap_model_v<Model>) {
    cost.density_evaluations += 1;
    return model.log_likelihood(x, y);
  } else {
    cost.density_evaluations += 3;
    const double log_f = model.log_transition(x, x_prev);
    const double log_g = model.log_likelihood(x, y);
    if (log_f == -std::numeric_limits<double>::infinity() || log_g == -std::numeric_limits<double>::infinity()) {
      return -std::numeric_limits<double>::infinity();
    }
    return log_f + log_g - model.log_proposal(x, x_prev);
  }
}

}  // namespace semires

#endif
