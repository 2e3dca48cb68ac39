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

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "semires/discrete_hmm.hpp"
#include "semires/estimators.hpp"
#include "semires/filter.hpp"
#include "semires/particle_set.hpp"
#include "semires/rng.hpp"
#include "semires/sis.hpp"
#include "toy_models.hpp"

using namespace semires;
using semires::testing::ConstantLikelihoodModel;
using semires::testing::RandomWalkModel;
using semires::testing::WideProposalModel;

namespace {

double weight_sum(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

WeightedParticleSet<double> random_set(std::size_t n, RngStream& rng) {
  std::vector<double> x(n);
  std::vector<double> lw(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    lw[i] = rng.normal();
  }
  return {x, lw};
}

}  // namespace

TEST_CASE("rng streams replay bit-identically") {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
    REQUIRE(a.normal() == b.normal());
  }
  RngStream c(42);
  const auto s1 = c.substream(3);
  c.uniform();
  const auto s2 = c.substream(3);
  CHECK(s1.seed() == s2.seed());
  CHECK(c.substream(3).seed() != c.substream(4).seed());
  for (int i = 0; i < 10000; ++i) {
    const double u = c.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normalization sums to one for wide-ranging log-weights") {
  RngStream rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(300);
    const double scale = std::pow(10.0, 4.0 * rng.uniform());
    std::vector<double> lw(n);
    for (double& v : lw) {
      v = scale * rng.normal();
    }
    const auto normalized = normalize_log_weights(lw);
    REQUIRE(std::abs(weight_sum(normalized.weights) - 1.0) <= 1e-12);
    for (double w : normalized.weights) {
      REQUIRE(w >= 0.0);
    }
  }
}

TEST_CASE("all-zero weights raise a degeneracy error carrying the raw log-weights") {
  const double ninf = -std::numeric_limits<double>::infinity();
  try {
    WeightedParticleSet<double> set({1.0, 2.0}, {ninf, ninf});
    FAIL("expected DegeneracyError");
  } catch (const DegeneracyError& e) {
    CHECK(e.log_weights().size() == 2);
    CHECK(e.generation() == 0);
  }
  CHECK_THROWS_AS(WeightedParticleSet<double>({}, {}), ContractViolation);
  CHECK_THROWS_AS(WeightedParticleSet<double>({1.0}, {std::nan("")}), ContractViolation);
  CHECK_THROWS_AS(WeightedParticleSet<double>({1.0, 2.0}, {0.0}), ContractViolation);
}

TEST_CASE("uniform sets have weights exactly 1/N") {
  const auto set = WeightedParticleSet<double>::uniform({1.0, 2.0, 3.0});
  for (double w : set.weights()) {
    CHECK(w == 1.0 / 3.0);
  }
  CHECK(set.is_uniform());
}

TEST_CASE("sis_step with a constant likelihood keeps the input weights") {
  RngStream rng(5);
  const auto prev = random_set(50, rng);
  ConstantLikelihoodModel model;
  CostLedger cost;
  const auto next = sis_step(prev, model, 0.0, rng, cost);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    CHECK(next.weight(i) == doctest::Approx(prev.weight(i)).epsilon(1e-14));
  }
  CHECK(cost.proposal_draws == 50);
}

TEST_CASE("bootstrap sis_step weights are proportional to previous weight times likelihood") {
  RngStream rng(6);
  const auto prev = random_set(40, rng);
  RandomWalkModel model{1.0, 0.3};
  const double y = 0.4;
  CostLedger cost;
  const auto next = sis_step(prev, model, y, rng, cost);
  std::vector<double> expected(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    expected[i] = prev.weight(i) * std::exp(semires::testing::normal_log_pdf(y, next.particle(i), 0.3));
  }
  const double total = weight_sum(expected);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    CHECK(next.weight(i) == doctest::Approx(expected[i] / total).epsilon(1e-12));
  }
  CHECK(cost.density_evaluations == 40);
}

TEST_CASE("non-bootstrap sis_step applies the full f g / q ratio") {
  RngStream rng(7);
  const auto prev = random_set(30, rng);
  WideProposalModel model;
  const double y = -0.2;
  CostLedger cost;
  const auto next = sis_step(prev, model, y, rng, cost);
  std::vector<double> expected(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    const double x = next.particle(i);
    const double xp = prev.particle(i);
    expected[i] = prev.weight(i) * std::exp(semires::testing::normal_log_pdf(x, xp, 1.0) +
                                            semires::testing::normal_log_pdf(y, x, 0.5) -
                                            semires::testing::normal_log_pdf(x, xp, 2.0));
  }
  const double total = weight_sum(expected);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    CHECK(next.weight(i) == doctest::Approx(expected[i] / total).epsilon(1e-12));
  }
  CHECK(cost.density_evaluations == 90);
  CHECK(cost.proposal_draws == 30);
}

TEST_CASE("sis_step on a 2-state discrete HMM matches the tabulated weight ratio") {
  oracle::DiscreteHMM hmm;
  hmm.num_states = 2;
  hmm.ancestor_states = {0, 1, 1};
  hmm.ancestor_weights = {0.2, 0.5, 0.3};
  hmm.transition = {{0.9, 0.1}, {0.3, 0.7}};
  hmm.proposal = {{0.5, 0.5}, {0.6, 0.4}};
  hmm.likelihood = {0.25, 0.8};
  const oracle::DiscreteHmmModel model(hmm);
  const auto prev = hmm.previous_set();
  RngStream rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    CostLedger cost;
    const auto next = sis_step(prev, model, oracle::FixedObservation{}, rng, cost);
    // Direct table lookup: w_j f(x|a_j) g(x) / q(x|a_j).
    std::vector<double> expected(3);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto a = static_cast<std::size_t>(hmm.ancestor_states[j]);
      const auto x = static_cast<std::size_t>(next.particle(j));
      expected[j] = hmm.ancestor_weights[j] * hmm.transition[a][x] * hmm.likelihood[x] / hmm.proposal[a][x];
    }
    const double total = weight_sum(expected);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(next.weight(j) == doctest::Approx(expected[j] / total).epsilon(1e-12));
    }
  }
}

// Likelihood around exp(-700) and far below.
struct Sharp {
  using State = double;
  using Observation = double;
  static constexpr bool kBootstrapProposal = true;
  double sample_prior(RngStream& rng) const { return rng.normal(); }
  double sample_proposal(double prev, RngStream& rng) const { return prev + rng.normal(); }
  double log_transition(double, double) const { return 0.0; }
  double log_likelihood(double x, double) const { return -700.0 - 50.0 * x * x; }
  double log_proposal(double, double) const { return 0.0; }
};

TEST_CASE("log-domain weighting survives likelihoods near exp(-700)") {
  RngStream rng(9);
  const auto prev = WeightedParticleSet<double>::uniform(std::vector<double>(100, 3.0));
  CostLedger cost;
  const auto next = sis_step(prev, Sharp{}, 0.0, rng, cost);
  CHECK(std::abs(weight_sum(next.weights()) - 1.0) <= 1e-12);
  for (double w : next.weights()) {
    REQUIRE(std::isfinite(w));
  }
  CHECK(effective_sample_size(next) >= 1.0);
}

TEST_CASE("estimate_sis") {
  SUBCASE("uniform weights and phi = 1 give 1") {
    const auto set = WeightedParticleSet<double>::uniform({0.3, 1.5, -2.0, 7.0});
    CHECK(estimate_sis(set, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("degenerate weights pick the first particle") {
    const double ninf = -std::numeric_limits<double>::infinity();
    const WeightedParticleSet<double> set({2.5, 9.0, 4.0}, {0.0, ninf, ninf});
    CHECK(estimate_sis(set, [](double x) { return x * x; }) == 6.25);
  }
  SUBCASE("weights (0.5, 0.3, 0.2) with phi (1, 2, 3) give 1.7") {
    const WeightedParticleSet<double> set({1.0, 2.0, 3.0}, {std::log(0.5), std::log(0.3), std::log(0.2)});
    CHECK(estimate_sis(set, [](double x) { return x; }) == doctest::Approx(1.7).epsilon(1e-14));
  }
  SUBCASE("invariant under rescaling raw weights and linear in phi") {
    RngStream rng(10);
    const auto set = random_set(25, rng);
    std::vector<double> shifted = set.log_weights();
    for (double& v : shifted) {
      v += 123.456;
    }
    const WeightedParticleSet<double> rescaled(set.particles(), shifted);
    auto phi = [](double x) { return std::sin(x); };
    auto psi = [](double x) { return x * x; };
    CHECK(estimate_sis(rescaled, phi) == doctest::Approx(estimate_sis(set, phi)).epsilon(1e-12));
    const double combo = estimate_sis(set, [&](double x) { return 2.0 * phi(x) - 3.0 * psi(x); });
    CHECK(combo == doctest::Approx(2.0 * estimate_sis(set, phi) - 3.0 * estimate_sis(set, psi)).epsilon(1e-12));
  }
  SUBCASE("non-finite phi is rejected") {
    const auto set = WeightedParticleSet<double>::uniform({1.0});
    CHECK_THROWS_AS(estimate_sis(set, [](double) { return std::nan(""); }), ContractViolation);
  }
}

TEST_CASE("estimate_post") {
  CHECK(estimate_post(WeightedParticleSet<double>::uniform({4.0, 4.0, 4.0}), [](double x) { return x * x; }) ==
        16.0);
  CHECK(estimate_post(WeightedParticleSet<double>::uniform({0.0, 4.0}), [](double x) { return x; }) == 2.0);
  const WeightedParticleSet<double> weighted({1.0, 2.0}, {0.0, 1.0});
  CHECK_THROWS_AS(estimate_post(weighted, [](double x) { return x; }), ContractViolation);
}

TEST_CASE("effective sample size") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(effective_sample_size(WeightedParticleSet<double>::uniform(std::vector<double>(17, 0.0))) ==
        doctest::Approx(17.0).epsilon(1e-12));
  CHECK(effective_sample_size(WeightedParticleSet<double>({1, 2, 3, 4}, {0.0, ninf, ninf, ninf})) == 1.0);
  CHECK(effective_sample_size(WeightedParticleSet<double>({1, 2, 3, 4}, {0.0, 0.0, ninf, ninf})) == 2.0);
  RngStream rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto set = random_set(1 + rng.uniform_index(64), rng);
    const double ess = effective_sample_size(set);
    REQUIRE(ess >= 1.0 - 1e-12);
    REQUIRE(ess <= static_cast<double>(set.size()) + 1e-9);
  }
}

TEST_CASE("particle filter resampling policies") {
  RandomWalkModel model{1.0, 0.5};
  RngStream rng(12);
  SUBCASE("always resample leaves uniform weights") {
    ParticleFilter filter(model, ResamplingScheme::multinomial(), 64);
    for (double y : {0.1, 0.3, 0.2}) {
      const auto step = filter.step(y, rng);
      REQUIRE(step.outcome.has_value());
      CHECK(step.posterior().is_uniform());
      CHECK(step.cost.proposal_draws == 64);
    }
  }
  SUBCASE("ESS threshold skips resampling when weights stay flat") {
    const ConstantLikelihoodModel constant;
    ParticleFilter flat(constant, ResamplingScheme::semi_independent(4), 32,
                        ResamplePolicy::ess_below(0.5));
    const auto step = flat.step(0.0, rng);
    CHECK_FALSE(step.outcome.has_value());
    CHECK(step.ess == doctest::Approx(32.0));
    CHECK_FALSE(flat.step(0.0, rng).outcome.has_value());
  }
  SUBCASE("ESS threshold triggers on a sharp observation") {
    const RandomWalkModel sharp_model{1.0, 0.01};
    ParticleFilter sharp(sharp_model, ResamplingScheme::multinomial(), 64,
                         ResamplePolicy::ess_below(0.5));
    const auto step = sharp.step(0.0, rng);
    CHECK(step.outcome.has_value());
  }
}
