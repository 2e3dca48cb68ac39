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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "semires/discrete_hmm.hpp"
#include "semires/estimators.hpp"
#include "semires/filter.hpp"
#include "semires/resampling.hpp"
#include "semires/sis.hpp"
#include "semires/stats.hpp"
#include "semires/tracking.hpp"
#include "toy_models.hpp"

using namespace semires;
using semires::testing::RandomWalkModel;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Fixture {
  RandomWalkModel model{1.0, 0.4};
  WeightedParticleSet<double> prev;
  WeightedParticleSet<double> sis;
  double y = 0.3;

  explicit Fixture(std::size_t n, std::uint64_t seed = 3)
      : prev(WeightedParticleSet<double>::uniform(std::vector<double>(n, 0.0))), sis(prev) {
    RngStream rng(seed);
    std::vector<double> x(n);
    for (double& v : x) {
      v = rng.normal();
    }
    prev = WeightedParticleSet<double>::uniform(x);
    CostLedger cost;
    sis = sis_step(prev, model, y, rng, cost);
  }
};

std::vector<std::size_t> slots_of(const std::vector<TraceEntry>& trace) {
  std::vector<std::size_t> slots;
  for (const auto& entry : trace) {
    slots.push_back(entry.slot);
  }
  return slots;
}

}  // namespace

TEST_CASE("categorical draws never select zero-weight slots") {
  RngStream rng(1);
  const std::vector<double> weights{0.0, 0.25, 0.0, 0.75, 0.0};
  for (int i = 0; i < 20000; ++i) {
    const auto l = categorical_draw(weights, rng);
    REQUIRE((l == 1 || l == 3));
  }
}

TEST_CASE("index subsets are distinct and uniform") {
  RngStream rng(2);
  const std::size_t n = 10;
  const std::size_t k = 4;
  std::vector<double> hits(n, 0.0);
  const int reps = 50000;
  for (int r = 0; r < reps; ++r) {
    auto subset = draw_index_subset(n, k, rng);
    REQUIRE(subset.size() == k);
    std::set<std::size_t> unique(subset.begin(), subset.end());
    REQUIRE(unique.size() == k);
    for (auto m : subset) {
      REQUIRE(m < n);
      hits[m] += 1.0;
    }
  }
  // Each index is included with probability k/n.
  const double expected = reps * static_cast<double>(k) / static_cast<double>(n);
  const double sd = std::sqrt(reps * 0.4 * 0.6);
  for (double h : hits) {
    CHECK(std::abs(h - expected) < 5.0 * sd);
  }
  CHECK_THROWS_AS(draw_index_subset(3, 4, rng), std::invalid_argument);
  CHECK(draw_index_subset(5, 0, rng).empty());
}

TEST_CASE("multinomial resampling") {
  RngStream rng(3);
  SUBCASE("degenerate weights copy particle 1 everywhere") {
    const WeightedParticleSet<double> set({7.0, 1.0, 2.0, 3.0}, {0.0, kNegInf, kNegInf, kNegInf});
    const auto out = multinomial_resample(set, rng);
    for (double x : out.resampled.particles()) {
      CHECK(x == 7.0);
    }
    CHECK(out.distinct_ancestors == 1);
    CHECK(out.distinct_draws == 1);
  }
  SUBCASE("output weights are all 1/N") {
    Fixture f(37);
    const auto out = multinomial_resample(f.sis, rng);
    for (double w : out.resampled.weights()) {
      CHECK(w == 1.0 / 37.0);
    }
    CHECK(out.cost.categorical_draws == 37);
    CHECK(out.cost.proposal_draws == 0);
  }
  SUBCASE("index frequency follows the weights") {
    const WeightedParticleSet<double> set({0.0, 1.0}, {std::log(0.7), std::log(0.3)});
    double first = 0.0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
      const auto out = multinomial_resample(set, rng);
      first += out.index_trace[0].slot == 0 ? 1.0 : 0.0;
    }
    CHECK(std::abs(first / reps - 0.7) < 0.005);
  }
  SUBCASE("post-resampling estimate equals recomputation from the index trace") {
    Fixture f(25);
    const auto out = multinomial_resample(f.sis, rng);
    double recomputed = 0.0;
    for (const auto& entry : out.index_trace) {
      recomputed += std::cos(f.sis.particle(entry.slot));
    }
    recomputed /= 25.0;
    CHECK(estimate_post(out.resampled, [](double x) { return std::cos(x); }) ==
          doctest::Approx(recomputed).epsilon(1e-15));
  }
}

TEST_CASE("independent resampling") {
  SUBCASE("a single particle is returned untouched with no rejuvenation") {
    Fixture f(1);
    RngStream rng(4);
    const auto out =
        independent_resample(f.prev, SupportState<double>::from_sis(f.sis), f.model, f.y, rng);
    CHECK(out.resampled.particle(0) == f.sis.particle(0));
    CHECK(out.cost.proposal_draws == 0);
  }
  SUBCASE("draws N(N-1) rejuvenation proposals and traces every generation") {
    Fixture f(12);
    RngStream rng(5);
    const auto out =
        independent_resample(f.prev, SupportState<double>::from_sis(f.sis), f.model, f.y, rng);
    CHECK(out.cost.proposal_draws == 12 * 11);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(out.index_trace[i].generation == i);
    }
    CHECK(out.distinct_draws == 12);
  }
}

TEST_CASE("semi-independent resampling") {
  SUBCASE("k = 0 reproduces multinomial indices bit for bit on a shared stream") {
    Fixture f(40);
    RngStream a(6);
    RngStream b(6);
    const auto sr = semi_independent_resample(f.prev, SupportState<double>::from_sis(f.sis), 0, f.model, f.y, a);
    const auto mn = multinomial_resample(f.sis, b);
    CHECK(slots_of(sr.index_trace) == slots_of(mn.index_trace));
    CHECK(sr.resampled.particles() == mn.resampled.particles());
    CHECK(sr.cost.proposal_draws == 0);
  }
  SUBCASE("rejuvenation cost is exactly (N - 1) k") {
    Fixture f(20);
    RngStream rng(7);
    for (std::size_t k : {1UL, 5UL, 20UL}) {
      const auto out =
          semi_independent_resample(f.prev, SupportState<double>::from_sis(f.sis), k, f.model, f.y, rng);
      CHECK(out.cost.proposal_draws == 19 * k);
      CHECK(out.cost.categorical_draws == 20);
    }
  }
  SUBCASE("k outside [0, N] is an argument error") {
    Fixture f(5);
    RngStream rng(8);
    CHECK_THROWS_AS(semi_independent_resample(f.prev, SupportState<double>::from_sis(f.sis), 6, f.model, f.y, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(ResamplingScheme::semi_independent(6).validate(5), std::invalid_argument);
    CHECK_THROWS_AS(ResamplingScheme::non_sequential(6).validate(5), std::invalid_argument);
  }
  SUBCASE("a rejuvenated support with zero mass reports its generation") {
    Fixture f(4);
    RngStream rng(9);
    auto dead = [](std::size_t, RngStream&, CostLedger& cost) {
      cost.proposal_draws += 1;
      return SlotDraw<double>{0.0, kNegInf};
    };
    try {
      (void)run_semi_independent(SupportState<double>::from_sis(f.sis), 4, dead, rng);
      FAIL("expected DegeneracyError");
    } catch (const DegeneracyError& e) {
      CHECK(e.generation() == 1);
    }
  }
}

TEST_CASE("non-sequential resampling") {
  Fixture f(60, 10);
  SUBCASE("parallel and sequential executions produce identical traces") {
    for (std::size_t k : {0UL, 7UL, 30UL, 60UL}) {
      RngStream a(11);
      RngStream b(11);
      const auto support = SupportState<double>::from_sis(f.sis);
      const auto seq = nonsequential_resample(f.prev, support, k, f.model, f.y, a, ParallelOptions{1});
      const auto par = nonsequential_resample(f.prev, support, k, f.model, f.y, b, ParallelOptions{4});
      CHECK(seq.index_trace == par.index_trace);
      CHECK(seq.resampled.particles() == par.resampled.particles());
      CHECK(seq.cost == par.cost);
      CHECK(seq.cost.proposal_draws == 59 * k);
    }
  }
  SUBCASE("k = N leaves no slot of the initial support past the first output") {
    RngStream rng(12);
    const auto out = nonsequential_resample(f.prev, SupportState<double>::from_sis(f.sis), 60, f.model, f.y, rng);
    CHECK(out.distinct_draws == 60);
  }
}

TEST_CASE("resample-move") {
  Fixture f(30, 13);
  SUBCASE("k = 0 is multinomial resampling") {
    RngStream a(14);
    RngStream b(14);
    const auto rm = resample_move(f.prev, f.sis, 0, f.model, f.y, a);
    const auto mn = multinomial_resample(f.sis, b);
    CHECK(rm.resampled.particles() == mn.resampled.particles());
    CHECK(rm.cost.proposal_draws == 0);
  }
  SUBCASE("costs N k proposal draws") {
    RngStream rng(15);
    const auto rm = resample_move(f.prev, f.sis, 3, f.model, f.y, rng);
    CHECK(rm.cost.proposal_draws == 90);
    CHECK(rm.resampled.is_uniform());
  }
  SUBCASE("equal proposed and current targets are always accepted") {
    CHECK(mh_acceptance_probability(-5.0, -5.0) == 1.0);
    CHECK(mh_acceptance_probability(kNegInf + 0.0, 0.0) == 1.0);
    CHECK(mh_acceptance_probability(0.0, kNegInf) == 0.0);
    CHECK(mh_acceptance_probability(0.0, std::log(0.25)) == doctest::Approx(0.25));
  }
}

TEST_CASE("one MH sweep leaves the per-ancestor target invariant") {
  // Single slot with ancestor state 0; start exactly from pi(v) prop. to f(v|0) g(v).
  oracle::DiscreteHMM hmm;
  hmm.num_states = 3;
  hmm.ancestor_states = {0};
  hmm.ancestor_weights = {1.0};
  hmm.transition = {{0.5, 0.3, 0.2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  hmm.proposal = {{0.2, 0.2, 0.6}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  hmm.likelihood = {0.9, 0.2, 0.6};
  hmm.validate();
  std::vector<double> target(3);
  double total = 0.0;
  for (std::size_t v = 0; v < 3; ++v) {
    target[v] = hmm.transition[0][v] * hmm.likelihood[v];
    total += target[v];
  }
  for (double& p : target) {
    p /= total;
  }

  const oracle::DiscreteHmmModel model(hmm);
  const auto prev = hmm.previous_set();
  const oracle::FixedObservation y;
  const ProposalRejuvenator<oracle::DiscreteHmmModel> rejuvenate(prev, model, y);
  RngStream rng(16);
  std::vector<double> counts(3, 0.0);
  const int reps = 100000;
  for (int r = 0; r < reps; ++r) {
    const int start = static_cast<int>(categorical_draw(target, rng));
    SupportState<int> support;
    support.particles = {start};
    support.raw_log_weights = {std::log(hmm.raw_weight(0, start))};
    support.weights = {1.0};
    support.birth = {0};
    const auto out = run_resample_move(support, 1, rejuvenate, rng);
    counts[static_cast<std::size_t>(out.resampled.particle(0))] += 1.0;
  }
  double chi = 0.0;
  for (std::size_t v = 0; v < 3; ++v) {
    const double e = reps * target[v];
    chi += (counts[v] - e) * (counts[v] - e) / e;
  }
  CHECK(chi_square_upper_tail(chi, 2.0) > 0.01);
}

TEST_CASE("per-step proposal draws match the closed-form cost of every scheme") {
  const tracking::TrackingModel model(tracking::TrackingParams{});
  RngStream sim_rng(17);
  tracking::TrackingParams params;
  params.horizon = 3;
  const auto trajectory = tracking::simulate(params, sim_rng);

  struct Case {
    ResamplingScheme scheme;
    std::size_t n;
    std::uint64_t expected;
  };
  const std::vector<Case> cases{
      {ResamplingScheme::multinomial(), 100, 100},
      {ResamplingScheme::independent(), 72, 5184},
      {ResamplingScheme::semi_independent(50), 100, 5050},
      {ResamplingScheme::non_sequential(50), 100, 5050},
      {ResamplingScheme::non_sequential(80), 100, 8020},
      {ResamplingScheme::resample_move(50), 100, 5100},
  };
  for (const auto& c : cases) {
    CHECK(c.scheme.proposal_draws_per_step(c.n) == c.expected);
    ParticleFilter filter(model, c.scheme, c.n);
    RngStream rng(18);
    for (const auto& y : trajectory.measurements) {
      const auto step = filter.step(y, rng);
      CHECK(step.cost.proposal_draws == c.expected);
    }
  }
}
