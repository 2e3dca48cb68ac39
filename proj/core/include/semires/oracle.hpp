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

#ifndef SEMIRES_ORACLE_HPP
#define SEMIRES_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semires/discrete_hmm.hpp"
#include "semires/resampling.hpp"
#include "semires/rng.hpp"

namespace semires::oracle {

/// Output tuple x^{1:N} of one resampling step.
using Outcome = std::vector<int>;

/// Exact law of the output tuple given the previous particles.
struct ExactLaw {
  std::vector<Outcome> outcomes;     ///< sorted, distinct
  std::vector<double> probabilities;  ///< aligned with outcomes

  [[nodiscard]] double total_probability() const;
  /// Probability of `outcome`, zero if not in the support.
  [[nodiscard]] double probability(const Outcome& outcome) const;
};

struct ExactMoments {
  double mean = 0.0;
  double variance = 0.0;
};

inline constexpr std::size_t kMaxEnumeratedParticles = 3;
inline constexpr std::size_t kMaxEnumeratedStates = 3;

/// Enumerates every support-draw, subset and index branch of `scheme`.
/**
 * Multinomial, independent, SR(k), NSSR(k) and resample-move each have
 * their own enumeration route, so SR(0) = multinomial and SR(N) =
 * independent are genuine cross-checks. Throws EnumerationTooLarge beyond
 * N = 3 particles or S = 3 states, and DegeneracyError if a reachable
 * support has all-zero weights.
 */
ExactLaw enumerate_law(const DiscreteHMM& hmm, const ResamplingScheme& scheme);

/// Mean and variance of (1/N) sum_i phi(x^i) under `law`; phi is tabulated per state.
ExactMoments law_moments(const ExactLaw& law, std::span<const double> phi);

/// enumerate_law followed by law_moments.
ExactMoments enumerate_scheme(const DiscreteHMM& hmm, const ResamplingScheme& scheme, std::span<const double> phi);

/// Largest absolute probability difference over the union of both supports.
double max_law_difference(const ExactLaw& a, const ExactLaw& b);

/// Exact law of one importance-sampling draw per slot (value tuple of the initial support).
ExactLaw enumerate_support_law(const DiscreteHMM& hmm);

struct SchemeMoments {
  std::string scheme;
  std::size_t k = 0;
  ExactMoments moments;
  double total_probability = 0.0;
};

struct Verdict {
  std::string check;
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Exact moments of every scheme for k = 0..N plus the ordering verdicts.
struct PropositionReport {
  std::size_t particles = 0;
  std::size_t states = 0;
  std::vector<SchemeMoments> moments;
  std::vector<Verdict> verdicts;

  [[nodiscard]] bool all_passed() const;
};

/// Checks unbiasedness, the variance sandwich, monotonicity in k, SR <= NSSR,
/// the k = 0 / k = N reductions and exhaustiveness, all with absolute slack `tolerance`.
PropositionReport check_propositions(const DiscreteHMM& hmm, std::span<const double> phi, double tolerance = 1e-12);

enum class SamplerMutation { kNone, kSwapLikelihoodExtremes };

struct OutcomeDeviation {
  Outcome outcome;
  double expected = 0.0;
  std::uint64_t observed = 0;
};

/// Chi-square goodness of fit of the real sampler against the enumerated law.
struct FitReport {
  std::string scheme;
  std::size_t k = 0;
  std::size_t particles = 0;
  std::uint64_t replicates = 0;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  bool impossible_outcome = false;  ///< sampler produced an outcome of exact probability zero
  std::vector<OutcomeDeviation> deviations;

  [[nodiscard]] bool passed(double alpha = 1e-3) const { return !impossible_outcome && p_value > alpha; }
};

/// Runs the library sampler (sis_step + resample) `replicates` times on `hmm`.
/**
 * With a mutation the sampler runs on a perturbed model while the reference
 * law still comes from the unperturbed one. Bins with expected count below
 * five are pooled before computing the statistic.
 */
FitReport validate_sampler(const DiscreteHMM& hmm, const ResamplingScheme& scheme, std::uint64_t replicates,
                           RngStream& rng, SamplerMutation mutation = SamplerMutation::kNone);

}  // namespace semires::oracle

#endif
