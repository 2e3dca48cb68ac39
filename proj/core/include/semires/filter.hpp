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

#ifndef SEMIRES_FILTER_HPP
#define SEMIRES_FILTER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

#include "semires/cost.hpp"
#include "semires/estimators.hpp"
#include "semires/model.hpp"
#include "semires/particle_set.hpp"
#include "semires/resampling.hpp"
#include "semires/rng.hpp"
#include "semires/sis.hpp"

namespace semires {

/// When the resampling step runs.
struct ResamplePolicy {
  enum class Trigger { kAlways, kEssBelow };

  Trigger trigger = Trigger::kAlways;
  double ess_fraction = 0.5;  ///< resample when ESS < ess_fraction * N

  static constexpr ResamplePolicy always() { return {}; }
  static constexpr ResamplePolicy ess_below(double fraction) { return {Trigger::kEssBelow, fraction}; }

  template <class State>
  [[nodiscard]] bool should_resample(const WeightedParticleSet<State>& set) const {
    if (trigger == Trigger::kAlways) {
      return true;
    }
    return effective_sample_size(set) < ess_fraction * static_cast<double>(set.size());
  }
};

template <class State>
struct FilterStep {
  WeightedParticleSet<State> weighted;  ///< output of the sampling/weighting step
  std::optional<ResampleOutcome<State>> outcome;
  CostLedger cost;  ///< whole step, importance sampling included
  double ess = 0.0;

  /// Particle set carried to the next step.
  [[nodiscard]] const WeightedParticleSet<State>& posterior() const {
    return outcome ? outcome->resampled : weighted;
  }
};

/// SIR particle filter parameterized by its resampling scheme.
/**
 * The first call to step() draws N particles from the prior and weights them
 * with the first observation; later calls propagate through the proposal.
 * The model must outlive the filter.
 */
template <StateSpaceModel Model>
class ParticleFilter {
 public:
  using State = typename Model::State;
  using Observation = typename Model::Observation;

  ParticleFilter(const Model& model, ResamplingScheme scheme, std::size_t particles,
                 ResamplePolicy policy = ResamplePolicy::always(), ParallelOptions parallel = {})
      : model_(model), scheme_(scheme), particles_(particles), policy_(policy), parallel_(parallel) {
    scheme_.validate(particles_);
  }

  FilterStep<State> step(const Observation& y, RngStream& rng) {
    CostLedger cost;
    if (!current_) {
      auto weighted = initial_step(particles_, model_, y, rng, cost);
      return finish(std::move(weighted), PriorRejuvenator<Model>(model_, y), rng, cost);
    }
    auto weighted = sis_step(*current_, model_, y, rng, cost);
    return finish(std::move(weighted), ProposalRejuvenator<Model>(*current_, model_, y), rng, cost);
  }

  [[nodiscard]] const std::optional<WeightedParticleSet<State>>& current() const noexcept { return current_; }
  [[nodiscard]] const ResamplingScheme& scheme() const noexcept { return scheme_; }
  [[nodiscard]] std::size_t particle_count() const noexcept { return particles_; }

 private:
  template <class Rejuvenate>
  FilterStep<State> finish(WeightedParticleSet<State> weighted, const Rejuvenate& rejuvenate, RngStream& rng,
                           CostLedger cost) {
    FilterStep<State> result{std::move(weighted), std::nullopt, cost, 0.0};
    result.ess = effective_sample_size(result.weighted);
    if (policy_.should_resample(result.weighted)) {
      result.outcome = resample(scheme_, result.weighted, rejuvenate, rng, parallel_);
      result.cost += result.outcome->cost;
    }
    current_ = result.posterior();
    return result;
  }

  const Model& model_;
  ResamplingScheme scheme_;
  std::size_t particles_;
  ResamplePolicy policy_;
  ParallelOptions parallel_;
  std::optional<WeightedParticleSet<State>> current_;
};

}  // namespace semires

#endif
