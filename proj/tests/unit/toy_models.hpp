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

#ifndef SEMIRES_TESTS_TOY_MODELS_HPP
#define SEMIRES_TESTS_TOY_MODELS_HPP

#include <cmath>
#include <numbers>

#include "semires/rng.hpp"

namespace semires::testing {

inline double normal_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// 1-D Gaussian random walk observed in Gaussian noise, bootstrap proposal.
struct RandomWalkModel {
  using State = double;
  using Observation = double;
  static constexpr bool kBootstrapProposal = true;

  double step_sd = 1.0;
  double obs_sd = 1.0;

  double sample_prior(RngStream& rng) const { return rng.normal(); }
  double sample_proposal(double prev, RngStream& rng) const { return prev + step_sd * rng.normal(); }
  double log_transition(double x, double prev) const { return normal_log_pdf(x, prev, step_sd); }
  double log_likelihood(double x, double y) const { return normal_log_pdf(y, x, obs_sd); }
  double log_proposal(double x, double prev) const { return log_transition(x, prev); }
};

/// Same dynamics with a wider, non-bootstrap proposal.
struct WideProposalModel {
  using State = double;
  using Observation = double;

  double step_sd = 1.0;
  double proposal_sd = 2.0;
  double obs_sd = 0.5;

  double sample_prior(RngStream& rng) const { return rng.normal(); }
  double sample_proposal(double prev, RngStream& rng) const { return prev + proposal_sd * rng.normal(); }
  double log_transition(double x, double prev) const { return normal_log_pdf(x, prev, step_sd); }
  double log_likelihood(double x, double y) const { return normal_log_pdf(y, x, obs_sd); }
  double log_proposal(double x, double prev) const { return normal_log_pdf(x, prev, proposal_sd); }
};

/// Random walk with a constant likelihood value exp(log_g).
struct ConstantLikelihoodModel {
  using State = double;
  using Observation = double;
  static constexpr bool kBootstrapProposal = true;

  double log_g = -3.0;

  double sample_prior(RngStream& rng) const { return rng.normal(); }
  double sample_proposal(double prev, RngStream& rng) const { return prev + rng.normal(); }
  double log_transition(double x, double prev) const { return normal_log_pdf(x, prev, 1.0); }
  double log_likelihood(double, double) const { return log_g; }
  double log_proposal(double x, double prev) const { return log_transition(x, prev); }
};

}  // namespace semires::testing

#endif
