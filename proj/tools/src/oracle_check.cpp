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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "semires/bench/experiments.hpp"

namespace semires::bench {
namespace {

std::vector<ResamplingScheme> fit_schemes(const ExperimentConfig& config, std::size_t n) {
  const auto wants = [&](const char* label) {
    return std::find(config.schemes.begin(), config.schemes.end(), label) != config.schemes.end();
  };
  std::vector<ResamplingScheme> schemes;
  if (wants("SIR")) {
    schemes.push_back(ResamplingScheme::multinomial());
  }
  if (wants("I-SIR")) {
    schemes.push_back(ResamplingScheme::independent());
  }
  for (std::size_t k = 0; k <= n; ++k) {
    if (wants("SR")) {
      schemes.push_back(ResamplingScheme::semi_independent(k));
    }
  }
  for (std::size_t k = 0; k <= n; ++k) {
    if (wants("NSSR")) {
      schemes.push_back(ResamplingScheme::non_sequential(k));
    }
  }
  for (std::size_t k = 1; k <= n; ++k) {
    if (wants("RM")) {
      schemes.push_back(ResamplingScheme::resample_move(k));
    }
  }
  return schemes;
}

}  // namespace

OracleReport run_oracle_check(const ExperimentConfig& config) {
  config.validate();
  OracleReport report;
  const RngStream master(config.seed);
  const auto mutation = config.mutation ? oracle::SamplerMutation::kSwapLikelihoodExtremes : oracle::SamplerMutation::kNone;
  for (std::size_t n : config.oracle_particles) {
    for (std::size_t instance = 0; instance < config.instances; ++instance) {
      RngStream rng = master.substream(n).substream(instance);
      const auto hmm = oracle::DiscreteHMM::random(config.oracle_states, n, rng);
      std::vector<double> phi(config.oracle_states);
      for (double& v : phi) {
        v = rng.normal();
      }
      auto propositions = oracle::check_propositions(hmm, phi);
      std::string failed;
      for (const auto& verdict : propositions.verdicts) {
        if (!verdict.passed) {
          failed += fmt::format("{} ({:.17g} vs {:.17g}); ", verdict.check, verdict.lhs, verdict.rhs);
        }
      }
      const std::string tag = fmt::format("N={} instance {}", n, instance);
      report.checks.push_back({"exact orderings " + tag, propositions.all_passed(),
                               failed.empty() ? fmt::format("{} verdicts hold", propositions.verdicts.size())
                                              : failed});

      // A constant test function has no variance under any scheme.
      const std::vector<double> ones(config.oracle_states, 1.0);
      double worst = 0.0;
      for (const auto& scheme : fit_schemes(config, n)) {
        const auto m = oracle::enumerate_scheme(hmm, scheme, ones);
        worst = std::max({worst, std::abs(m.variance), std::abs(m.mean - 1.0)});
      }
      report.checks.push_back({"constant phi " + tag, worst <= 1e-12, fmt::format("max deviation {:.3g}", worst)});
      report.instances.push_back(std::move(propositions));

      if (instance < config.fit_instances) {
        for (const auto& scheme : fit_schemes(config, n)) {
          RngStream fit_rng = rng.substream(report.fits.size());
          FitRecord record{instance, oracle::validate_sampler(hmm, scheme, config.fit_replicates, fit_rng, mutation)};
          record.passed = record.fit.passed(config.fit_alpha);
          report.checks.push_back({fmt::format("fit {}(k={}) {}", scheme.name(), scheme.k(), tag), record.passed,
                                   fmt::format("chi2 = {:.4g}, dof = {}, p = {:.4g}{}", record.fit.chi_square,
                                               record.fit.degrees_of_freedom, record.fit.p_value,
                                               record.fit.impossible_outcome ? ", impossible outcome" : "")});
          report.fits.push_back(std::move(record));
        }
      }
    }
  }
  return report;
}

}  // namespace semires::bench
