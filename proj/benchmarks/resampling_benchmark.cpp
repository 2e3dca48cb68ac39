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

// One resampling step per scheme on the tracking model, N = 100.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <optional>

#include "semires/cost.hpp"
#include "semires/filter.hpp"
#include "semires/sis.hpp"
#include "semires/tracking.hpp"

namespace {

using semires::tracking::TrackingModel;
using semires::tracking::TrackingParams;
using semires::tracking::TrackingState;

constexpr std::size_t kParticles = 100;

struct Frozen {
  TrackingParams params;
  TrackingModel model{params};
  semires::tracking::Measurement y;
  semires::WeightedParticleSet<TrackingState> ancestors;

  Frozen() : ancestors(make_ancestors()) {}

  semires::WeightedParticleSet<TrackingState> make_ancestors() {
    params.horizon = 3;
    semires::RngStream rng(2026);
    const auto truth = semires::tracking::simulate(params, rng);
    semires::ParticleFilter filter(model, semires::ResamplingScheme::multinomial(), kParticles);
    std::optional<semires::WeightedParticleSet<TrackingState>> last;
    for (std::size_t t = 0; t < 3; ++t) {
      last = filter.step(truth.measurements[t], rng).posterior();
    }
    y = truth.measurements[3];
    return *last;
  }
};

const Frozen& frozen() {
  static const Frozen instance;
  return instance;
}

void run_scheme(benchmark::State& state, semires::ResamplingScheme scheme) {
  const Frozen& f = frozen();
  semires::RngStream rng(7);
  const semires::ProposalRejuvenator<TrackingModel> rejuvenate(f.ancestors, f.model, f.y);
  std::uint64_t draws = 0;
  for (auto _ : state) {
    semires::CostLedger cost;
    const auto weighted = semires::sis_step(f.ancestors, f.model, f.y, rng, cost);
    auto outcome = semires::resample(scheme, weighted, rejuvenate, rng);
    draws += cost.proposal_draws + outcome.cost.proposal_draws;
    benchmark::DoNotOptimize(outcome.resampled);
  }
  state.counters["draws_per_step"] =
      benchmark::Counter(static_cast<double>(draws) / static_cast<double>(state.iterations()));
}

void BM_Multinomial(benchmark::State& state) { run_scheme(state, semires::ResamplingScheme::multinomial()); }
void BM_Independent(benchmark::State& state) { run_scheme(state, semires::ResamplingScheme::independent()); }
void BM_SemiIndependent(benchmark::State& state) {
  run_scheme(state, semires::ResamplingScheme::semi_independent(static_cast<std::size_t>(state.range(0))));
}
void BM_NonSequential(benchmark::State& state) {
  run_scheme(state, semires::ResamplingScheme::non_sequential(static_cast<std::size_t>(state.range(0))));
}
void BM_ResampleMove(benchmark::State& state) {
  run_scheme(state, semires::ResamplingScheme::resample_move(static_cast<std::size_t>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_Multinomial);
BENCHMARK(BM_Independent);
BENCHMARK(BM_SemiIndependent)->Arg(10)->Arg(50)->Arg(100);
BENCHMARK(BM_NonSequential)->Arg(10)->Arg(50)->Arg(100);
BENCHMARK(BM_ResampleMove)->Arg(10)->Arg(50);

BENCHMARK_MAIN();
