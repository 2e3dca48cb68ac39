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

#ifndef SEMIRES_ESTIMATORS_HPP
#define SEMIRES_ESTIMATORS_HPP

#include <cmath>
#include <concepts>
#include <cstddef>

#include "semires/errors.hpp"
#include "semires/particle_set.hpp"

namespace semires {

namespace detail {

template <class Phi, class State>
double checked_phi(Phi&& phi, const State& x) {
  const double value = static_cast<double>(phi(x));
  if (!std::isfinite(value)) {
    throw ContractViolation("test function returned a non-finite value");
  }
  return value;
}

}  // namespace detail

/// Weighted (importance sampling) estimate: sum_i w^i phi(x^i).
template <class State, class Phi>
  requires std::invocable<Phi&, const State&>
double estimate_sis(const WeightedParticleSet<State>& set, Phi&& phi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    sum += set.weight(i) * detail::checked_phi(phi, set.particle(i));
  }
  return sum;
}

/// Post-resampling estimate (1/N) sum_i phi(x^i). Requires uniform weights.
template <class State, class Phi>
  requires std::invocable<Phi&, const State&>
double estimate_post(const WeightedParticleSet<State>& set, Phi&& phi) {
  if (!set.is_uniform()) {
    throw ContractViolation("estimate_post needs a uniformly weighted (resampled) set");
  }
  double sum = 0.0;
  for (const auto& x : set.particles()) {
    sum += detail::checked_phi(phi, x);
  }
  return sum / static_cast<double>(set.size());
}

/// Effective sample size 1 / sum_i (w^i)^2, in [1, N].
template <class State>
double effective_sample_size(const WeightedParticleSet<State>& set) {
  double sum_sq = 0.0;
  for (double w : set.weights()) {
    sum_sq += w * w;
  }
  return 1.0 / sum_sq;
}

}  // namespace semires

#endif
