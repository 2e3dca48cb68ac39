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

#ifndef SEMIRES_RESAMPLING_HPP
#define SEMIRES_RESAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "semires/cost.hpp"
#include "semires/model.hpp"
#include "semires/particle_set.hpp"
#include "semires/rng.hpp"

namespace semires {

enum class SchemeKind { kMultinomial, kIndependent, kSemiIndependent, kNonSequential, kResampleMove };

/// Resampling scheme tag plus its rejuvenation count k.
class ResamplingScheme {
 public:
  static constexpr ResamplingScheme multinomial() { return {SchemeKind::kMultinomial, 0}; }
  static constexpr ResamplingScheme independent() { return {SchemeKind::kIndependent, 0}; }
  static constexpr ResamplingScheme semi_independent(std::size_t k) { return {SchemeKind::kSemiIndependent, k}; }
  static constexpr ResamplingScheme non_sequential(std::size_t k) { return {SchemeKind::kNonSequential, k}; }
  static constexpr ResamplingScheme resample_move(std::size_t k) { return {SchemeKind::kResampleMove, k}; }

  [[nodiscard]] constexpr SchemeKind kind() const noexcept { return kind_; }
  [[nodiscard]] constexpr std::size_t k() const noexcept { return k_; }

  /// Short label: SIR, I-SIR, SR, NSSR or RM.
  [[nodiscard]] std::string name() const;

  /// Throws std::invalid_argument when k is not admissible for N particles.
  void validate(std::size_t n) const;

  /// Closed-form proposal draws per filter step, importance sampling included.
  [[nodiscard]] std::uint64_t proposal_draws_per_step(std::size_t n) const;

  friend constexpr bool operator==(const ResamplingScheme&, const ResamplingScheme&) = default;

 private:
  constexpr ResamplingScheme(SchemeKind kind, std::size_t k) : kind_(kind), k_(k) {}

  SchemeKind kind_;
  std::size_t k_;
};

/// Where output slot i was drawn from: support generation and slot index l^i.
struct TraceEntry {
  std::size_t generation;
  std::size_t slot;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

template <class State>
struct ResampleOutcome {
  WeightedParticleSet<State> resampled;  ///< uniform weights 1/N
  std::vector<TraceEntry> index_trace;
  std::vector<std::size_t> ancestors;  ///< previous-time parent of each output
  CostLedger cost;                     ///< resampling stage only
  std::size_t distinct_ancestors = 0;
  std::size_t distinct_draws = 0;  ///< distinct proposal draws among the outputs
};

/// Weighted support x~^{i,:} from which output i is drawn.
/**
 * Slot j always holds a draw from q(. | x_{t-1}^j); `birth` records the
 * generation at which the slot was last redrawn.
 */
template <class State>
struct SupportState {
  std::vector<State> particles;
  std::vector<double> raw_log_weights;
  std::vector<double> weights;
  std::vector<std::size_t> birth;

  static SupportState from_sis(const WeightedParticleSet<State>& sis) {
    return SupportState{sis.particles(), sis.log_weights(), sis.weights(), std::vector<std::size_t>(sis.size(), 0)};
  }

  [[nodiscard]] std::size_t size() const noexcept { return particles.size(); }

  /// Renormalizes from all N raw weights.
  void refresh_weights(std::size_t generation) { normalize_log_weights_into(raw_log_weights, weights, generation); }
};

/// A fresh proposal draw for one support slot.
template <class State>
struct SlotDraw {
  State value;
  double raw_log_weight;
};

template <class Fn, class State>
concept SlotRejuvenator = std::invocable<const Fn&, std::size_t, RngStream&, CostLedger&> &&
                          std::convertible_to<std::invoke_result_t<const Fn&, std::size_t, RngStream&, CostLedger&>,
                                              SlotDraw<State>>;

/// Redraws slot j from q(. | x_{t-1}^j) and weights it with the W. formula.
template <StateSpaceModel Model>
class ProposalRejuvenator {
 public:
  using State = typename Model::State;

  ProposalRejuvenator(const WeightedParticleSet<State>& prev, const Model& model,
                      const typename Model::Observation& y)
      : prev_(prev), model_(model), y_(y) {}

  SlotDraw<State> operator()(std::size_t slot, RngStream& rng, CostLedger& cost) const {
    State x = model_.sample_proposal(prev_.particle(slot), rng);
    cost.proposal_draws += 1;
    const double raw = std::log(prev_.weight(slot)) + log_weight_increment(model_, x, prev_.particle(slot), y_, cost);
    return {std::move(x), raw};
  }

 private:
  const WeightedParticleSet<State>& prev_;
  const Model& model_;
  const typename Model::Observation& y_;
};

/// Rejuvenation at the initial time: prior draws weighted by the likelihood.
template <StateSpaceModel Model>
class PriorRejuvenator {
 public:
  using State = typename Model::State;

  PriorRejuvenator(const Model& model, const typename Model::Observation& y) : model_(model), y_(y) {}

  SlotDraw<State> operator()(std::size_t /*slot*/, RngStream& rng, CostLedger& cost) const {
    State x = model_.sample_prior(rng);
    cost.proposal_draws += 1;
    cost.density_evaluations += 1;
    const double raw = model_.log_likelihood(x, y_);
    return {std::move(x), raw};
  }

 private:
  const Model& model_;
  const typename Model::Observation& y_;
};

/// Inverse-CDF categorical draw over slot order with a single uniform.
/**
 * Never returns a slot of zero weight. `weights` should sum to one; the
 * uniform is scaled by the actual sum to absorb rounding.
 */
std::size_t categorical_draw(std::span<const double> weights, RngStream& rng);

/// k distinct indices out of [0, n), drawn sequentially with probability 1/(n - j) at step j.
std::vector<std::size_t> draw_index_subset(std::size_t n, std::size_t k, RngStream& rng);

/// min{1, exp(proposed - current)} for log targets.
double mh_acceptance_probability(double current_log_target, double proposed_log_target);

/// Number of distinct values in `keys`.
std::size_t count_distinct(std::vector<std::uint64_t> keys);

struct ParallelOptions {
  std::size_t threads = 1;
};

namespace detail {

inline std::uint64_t draw_key(std::size_t slot, std::size_t generation) {
  return (static_cast<std::uint64_t>(generation) << 32U) | static_cast<std::uint64_t>(slot);
}

template <class State>
ResampleOutcome<State> make_outcome(std::vector<State> outputs, std::vector<TraceEntry> trace,
                                    std::vector<std::size_t> ancestors, std::vector<std::uint64_t> draw_keys,
                                    CostLedger cost) {
  auto resampled = WeightedParticleSet<State>::uniform(std::move(outputs));
  std::vector<std::uint64_t> ancestor_keys(ancestors.begin(), ancestors.end());
  const std::size_t distinct_ancestors = count_distinct(std::move(ancestor_keys));
  const std::size_t distinct_draws = count_distinct(std::move(draw_keys));
  return ResampleOutcome<State>{std::move(resampled), std::move(trace), std::move(ancestors), cost,
                                distinct_ancestors, distinct_draws};
}

}  // namespace detail

/// Classical multinomial resampling: N categorical draws over a fixed support.
template <class State>
ResampleOutcome<State> run_multinomial(const SupportState<State>& support, RngStream& rng) {
  const std::size_t n = support.size();
  std::vector<State> outputs;
  outputs.reserve(n);
  std::vector<TraceEntry> trace(n);
  std::vector<std::size_t> ancestors(n);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = categorical_draw(support.weights, rng);
    outputs.push_back(support.particles[l]);
    trace[i] = {0, l};
    ancestors[i] = l;
    keys[i] = detail::draw_key(l, support.birth[l]);
  }
  CostLedger cost;
  cost.categorical_draws = n;
  return detail::make_outcome(std::move(outputs), std::move(trace), std::move(ancestors), std::move(keys), cost);
}

/// Semi-independent resampling SR(k).
/**
 * Output i is drawn from support i; between consecutive outputs, k slots
 * chosen uniformly without replacement are redrawn from their ancestors and
 * the whole support is renormalized. k = 0 is multinomial resampling and
 * k = N independent resampling. Costs (N - 1) k proposal draws.
 */
template <class State, SlotRejuvenator<State> Rejuvenate>
ResampleOutcome<State> run_semi_independent(SupportState<State> support, std::size_t k, const Rejuvenate& rejuvenate,
                                            RngStream& rng) {
  const std::size_t n = support.size();
  if (k > n) {
    throw std::invalid_argument("rejuvenation count k=" + std::to_string(k) + " exceeds N=" + std::to_string(n));
  }
  std::vector<State> outputs;
  outputs.reserve(n);
  std::vector<TraceEntry> trace(n);
  std::vector<std::size_t> ancestors(n);
  std::vector<std::uint64_t> keys(n);
  CostLedger cost;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = categorical_draw(support.weights, rng);
    cost.categorical_draws += 1;
    outputs.push_back(support.particles[l]);
    trace[i] = {i, l};
    ancestors[i] = l;
    keys[i] = detail::draw_key(l, support.birth[l]);

    if (i + 1 < n && k > 0) {
      for (std::size_t slot : draw_index_subset(n, k, rng)) {
        auto draw = rejuvenate(slot, rng, cost);
        support.particles[slot] = std::move(draw.value);
        support.raw_log_weights[slot] = draw.raw_log_weight;
        support.birth[slot] = i + 1;
      }
      support.refresh_weights(i + 1);
    }
  }
  return detail::make_outcome(std::move(outputs), std::move(trace), std::move(ancestors), std::move(keys), cost);
}

/// Independent resampling: every support after the first is fully redrawn.
template <class State, SlotRejuvenator<State> Rejuvenate>
ResampleOutcome<State> run_independent(SupportState<State> support, const Rejuvenate& rejuvenate, RngStream& rng) {
  const std::size_t n = support.size();
  std::vector<State> outputs;
  outputs.reserve(n);
  std::vector<TraceEntry> trace(n);
  std::vector<std::size_t> ancestors(n);
  std::vector<std::uint64_t> keys(n);
  CostLedger cost;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = categorical_draw(support.weights, rng);
    cost.categorical_draws += 1;
    outputs.push_back(support.particles[l]);
    trace[i] = {i, l};
    ancestors[i] = l;
    keys[i] = detail::draw_key(l, i);

    if (i + 1 < n) {
      for (std::size_t slot = 0; slot < n; ++slot) {
        auto draw = rejuvenate(slot, rng, cost);
        support.particles[slot] = std::move(draw.value);
        support.raw_log_weights[slot] = draw.raw_log_weight;
      }
      support.refresh_weights(i + 1);
    }
  }
  return detail::make_outcome(std::move(outputs), std::move(trace), std::move(ancestors), std::move(keys), cost);
}

/// Non-sequential semi-independent resampling NSSR(k).
/**
 * Support i (i >= 1) is the initial support with k uniformly chosen slots
 * redrawn; supports do not depend on one another. One 64-bit step key is
 * taken from `rng` and support i uses the substream keyed by i, so the
 * result is identical whatever the number of worker threads.
 */
template <class State, SlotRejuvenator<State> Rejuvenate>
ResampleOutcome<State> run_nonsequential(const SupportState<State>& initial, std::size_t k,
                                         const Rejuvenate& rejuvenate, RngStream& rng,
                                         const ParallelOptions& parallel = {}) {
  const std::size_t n = initial.size();
  if (k > n) {
    throw std::invalid_argument("rejuvenation count k=" + std::to_string(k) + " exceeds N=" + std::to_string(n));
  }
  const RngStream step(rng.next_u64());

  struct SlotResult {
    std::size_t slot = 0;
    bool redrawn = false;
    std::optional<State> value;
    CostLedger cost;
    std::exception_ptr error;
  };
  std::vector<SlotResult> results(n);

  auto build = [&](std::size_t i) {
    SlotResult& result = results[i];
    try {
      RngStream sub = step.substream(i);
      if (i == 0 || k == 0) {
        result.slot = categorical_draw(initial.weights, sub);
        result.cost.categorical_draws += 1;
        return;
      }
      std::vector<double> raw = initial.raw_log_weights;
      std::vector<std::size_t> slots = draw_index_subset(n, k, sub);
      std::vector<State> fresh;
      fresh.reserve(k);
      for (std::size_t slot : slots) {
        auto draw = rejuvenate(slot, sub, result.cost);
        raw[slot] = draw.raw_log_weight;
        fresh.push_back(std::move(draw.value));
      }
      std::vector<double> weights;
      normalize_log_weights_into(raw, weights, i);
      result.slot = categorical_draw(weights, sub);
      result.cost.categorical_draws += 1;
      const auto it = std::find(slots.begin(), slots.end(), result.slot);
      if (it != slots.end()) {
        result.redrawn = true;
        result.value = std::move(fresh[static_cast<std::size_t>(it - slots.begin())]);
      }
    } catch (...) {
      result.error = std::current_exception();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(parallel.threads, 1, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      build(i);
    }
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          build(i);
        }
      });
    }
  }

  std::vector<State> outputs;
  outputs.reserve(n);
  std::vector<TraceEntry> trace(n);
  std::vector<std::size_t> ancestors(n);
  std::vector<std::uint64_t> keys(n);
  CostLedger cost;
  for (std::size_t i = 0; i < n; ++i) {
    SlotResult& result = results[i];
    if (result.error) {
      std::rethrow_exception(result.error);
    }
    cost += result.cost;
    const std::size_t l = result.slot;
    outputs.push_back(result.redrawn ? std::move(*result.value) : initial.particles[l]);
    trace[i] = {i, l};
    ancestors[i] = l;
    keys[i] = detail::draw_key(l, result.redrawn ? i : initial.birth[l]);
  }
  return detail::make_outcome(std::move(outputs), std::move(trace), std::move(ancestors), std::move(keys), cost);
}

/// Multinomial resampling followed by k independent Metropolis-Hastings moves per particle.
/**
 * Each particle keeps its resampled ancestor a; a move proposes
 * x' ~ q(. | x_{t-1}^a) and accepts with probability
 * min{1, w(x') / w(x)} where w is the raw importance weight with ancestor a,
 * so the per-ancestor target is proportional to f(x | x_{t-1}^a) g(y | x).
 * Costs N k proposal draws.
 */
template <class State, SlotRejuvenator<State> Rejuvenate>
ResampleOutcome<State> run_resample_move(const SupportState<State>& support, std::size_t k,
                                         const Rejuvenate& rejuvenate, RngStream& rng) {
  auto outcome = run_multinomial(support, rng);
  if (k == 0) {
    return outcome;
  }
  const std::size_t n = support.size();
  std::vector<State> outputs = outcome.resampled.particles();
  std::vector<std::uint64_t> keys(n);
  CostLedger cost = outcome.cost;
  std::uint64_t move_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ancestor = outcome.ancestors[i];
    double current = support.raw_log_weights[ancestor];
    keys[i] = detail::draw_key(ancestor, support.birth[ancestor]);
    for (std::size_t iter = 0; iter < k; ++iter) {
      auto draw = rejuvenate(ancestor, rng, cost);
      const double accept = mh_acceptance_probability(current, draw.raw_log_weight);
      if (rng.uniform() < accept) {
        outputs[i] = std::move(draw.value);
        current = draw.raw_log_weight;
        keys[i] = (std::uint64_t{1} << 63U) | move_id;
      }
      ++move_id;
    }
  }
  return detail::make_outcome(std::move(outputs), std::move(outcome.index_trace), std::move(outcome.ancestors),
                              std::move(keys), cost);
}

/// Runs `scheme` on the SIS output `sis_set`.
template <class State, SlotRejuvenator<State> Rejuvenate>
ResampleOutcome<State> resample(const ResamplingScheme& scheme, const WeightedParticleSet<State>& sis_set,
                                const Rejuvenate& rejuvenate, RngStream& rng, const ParallelOptions& parallel = {}) {
  scheme.validate(sis_set.size());
  auto support = SupportState<State>::from_sis(sis_set);
  switch (scheme.kind()) {
    case SchemeKind::kMultinomial:
      return run_multinomial(support, rng);
    case SchemeKind::kIndependent:
      return run_independent(std::move(support), rejuvenate, rng);
    case SchemeKind::kSemiIndependent:
      return run_semi_independent(std::move(support), scheme.k(), rejuvenate, rng);
    case SchemeKind::kNonSequential:
      return run_nonsequential(support, scheme.k(), rejuvenate, rng, parallel);
    case SchemeKind::kResampleMove:
      return run_resample_move(support, scheme.k(), rejuvenate, rng);
  }
  throw std::logic_error("unknown resampling scheme");
}

// Model-level entry points.

template <class State>
ResampleOutcome<State> multinomial_resample(const WeightedParticleSet<State>& set, RngStream& rng) {
  return run_multinomial(SupportState<State>::from_sis(set), rng);
}

template <StateSpaceModel Model>
ResampleOutcome<typename Model::State> independent_resample(
    const WeightedParticleSet<typename Model::State>& prev, const SupportState<typename Model::State>& initial_support,
    const Model& model, const typename Model::Observation& y, RngStream& rng) {
  return run_independent(initial_support, ProposalRejuvenator<Model>(prev, model, y), rng);
}

template <StateSpaceModel Model>
ResampleOutcome<typename Model::State> semi_independent_resample(
    const WeightedParticleSet<typename Model::State>& prev, const SupportState<typename Model::State>& initial_support,
    std::size_t k, const Model& model, const typename Model::Observation& y, RngStream& rng) {
  return run_semi_independent(initial_support, k, ProposalRejuvenator<Model>(prev, model, y), rng);
}

template <StateSpaceModel Model>
ResampleOutcome<typename Model::State> nonsequential_resample(
    const WeightedParticleSet<typename Model::State>& prev, const SupportState<typename Model::State>& initial_support,
    std::size_t k, const Model& model, const typename Model::Observation& y, RngStream& rng,
    const ParallelOptions& parallel = {}) {
  return run_nonsequential(initial_support, k, ProposalRejuvenator<Model>(prev, model, y), rng, parallel);
}

template <StateSpaceModel Model>
ResampleOutcome<typename Model::State> resample_move(const WeightedParticleSet<typename Model::State>& prev,
                                                     const WeightedParticleSet<typename Model::State>& sis_set,
                                                     std::size_t k, const Model& model,
                                                     const typename Model::Observation& y, RngStream& rng) {
  return run_resample_move(SupportState<typename Model::State>::from_sis(sis_set), k,
                           ProposalRejuvenator<Model>(prev, model, y), rng);
}

}  // namespace semires

#endif
