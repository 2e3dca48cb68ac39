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
#include <optional>

#include <fmt/format.h>

#include "semires/bench/experiments.hpp"
#include "semires/estimators.hpp"
#include "semires/filter.hpp"
#include "semires/sis.hpp"
#include "semires/tracking.hpp"

namespace semires::bench {
namespace {

using tracking::TrackingModel;
using tracking::TrackingParams;
using tracking::TrackingState;

constexpr std::uint64_t kTrajectoryTag = 0x7472616a65637479ULL;
constexpr std::uint64_t kWarmupTag = 0x7761726d7570ULL;

std::vector<Method> sweep_methods(const ExperimentConfig& config) {
  const std::size_t n = config.particles;
  const auto wants = [&](const char* label) {
    return std::find(config.schemes.begin(), config.schemes.end(), label) != config.schemes.end();
  };
  std::vector<Method> methods;
  if (wants("SIR")) {
    methods.push_back({"SIR", ResamplingScheme::multinomial(), n});
  }
  if (wants("I-SIR")) {
    methods.push_back({"I-SIR", ResamplingScheme::independent(), n});
  }
  for (const char* label : {"SR", "NSSR", "RM"}) {
    if (!wants(label)) {
      continue;
    }
    for (std::size_t k : config.k_values) {
      const std::string name = label;
      const auto scheme = name == "SR"     ? ResamplingScheme::semi_independent(k)
                          : name == "NSSR" ? ResamplingScheme::non_sequential(k)
                                           : ResamplingScheme::resample_move(k);
      methods.push_back({name, scheme, n});
    }
  }
  return methods;
}

double variance_slack(const ExperimentConfig& config, const VarianceRow& a, const VarianceRow& b) {
  return config.slack_se * std::hypot(a.estimate.variance_standard_error(), b.estimate.variance_standard_error());
}

}  // namespace

VarianceReport run_variance_sweep(const ExperimentConfig& config) {
  config.validate();
  TrackingParams params;
  params.sigma_range = config.noise_grid.front().sigma_range;
  params.sigma_bearing = config.noise_grid.front().sigma_bearing;
  params.horizon = config.freeze_step;
  params.validate();
  const TrackingModel model(params);
  const RngStream master(config.seed);

  // Freeze the ancestors: run SIR up to the step before the swept one.
  RngStream sim = master.substream(kTrajectoryTag);
  const auto truth = tracking::simulate(params, sim);
  ParticleFilter warmup(model, ResamplingScheme::multinomial(), config.particles);
  RngStream warm = master.substream(kWarmupTag);
  std::optional<WeightedParticleSet<TrackingState>> ancestors;
  for (std::size_t t = 0; t < config.freeze_step; ++t) {
    ancestors = warmup.step(truth.measurements[t], warm).posterior();
  }
  const auto& y = truth.measurements[config.freeze_step];
  const auto phi = [](const TrackingState& x) { return x(0); };

  VarianceReport report;
  const auto methods = sweep_methods(config);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const Method& method = methods[m];
    const RngStream streams = master.substream(m + 1);
    std::vector<double> estimates(config.replicates);
    std::vector<std::uint64_t> draws(config.replicates);
    parallel_for(config.replicates, config.threads, [&](std::size_t r) {
      RngStream rng = streams.substream(r);
      CostLedger cost;
      const auto weighted = sis_step(*ancestors, model, y, rng, cost);
      const auto outcome =
          resample(method.scheme, weighted, ProposalRejuvenator<TrackingModel>(*ancestors, model, y), rng);
      cost += outcome.cost;
      estimates[r] = estimate_post(outcome.resampled, phi);
      draws[r] = cost.proposal_draws;
    });
    VarianceRow row;
    row.method = method;
    row.proposal_draws = draws.front();
    bool conserved = true;
    for (std::size_t r = 0; r < config.replicates; ++r) {
      row.estimate.add(estimates[r]);
      conserved = conserved && draws[r] == closed_form_cost(method);
    }
    report.checks.push_back({fmt::format("cost {}(k={})", method.label, method.k()), conserved,
                             fmt::format("{} draws per replicate, closed form {}", row.proposal_draws,
                                         closed_form_cost(method))});
    report.rows.push_back(std::move(row));
  }

  // Unbiasedness: every pair of schemes agrees on the mean.
  double worst_z = 0.0;
  std::string worst_pair = "none";
  for (std::size_t a = 0; a < report.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < report.rows.size(); ++b) {
      const double z = std::abs(two_sample_z(report.rows[a].estimate, report.rows[b].estimate));
      if (z > worst_z) {
        worst_z = z;
        worst_pair = fmt::format("{}(k={}) vs {}(k={})", report.rows[a].method.label, report.rows[a].method.k(),
                                 report.rows[b].method.label, report.rows[b].method.k());
      }
    }
  }
  report.checks.push_back({"pairwise means agree", worst_z < config.z_threshold,
                           fmt::format("max |z| = {:.3f} ({}), threshold {}", worst_z, worst_pair,
                                       config.z_threshold)});

  const auto find = [&](const std::string& label, std::size_t k) -> const VarianceRow* {
    for (const auto& row : report.rows) {
      if (row.method.label == label && (label == "SIR" || label == "I-SIR" || row.method.k() == k)) {
        return &row;
      }
    }
    return nullptr;
  };
  const auto at_most = [&](const std::string& name, const VarianceRow* lo, const VarianceRow* hi) {
    if (lo && hi) {
      const double slack = variance_slack(config, *lo, *hi);
      const double lv = lo->estimate.variance();
      const double hv = hi->estimate.variance();
      report.checks.push_back({name, lv <= hv + slack, fmt::format("{:.6g} <= {:.6g} + {:.3g}", lv, hv, slack)});
    }
  };
  const VarianceRow* sir = find("SIR", 0);
  const VarianceRow* isir = find("I-SIR", 0);
  std::vector<std::size_t> ks = config.k_values;
  std::sort(ks.begin(), ks.end());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const std::size_t k = ks[i];
    for (const std::string label : {"SR", "NSSR"}) {
      const VarianceRow* row = find(label, k);
      at_most(fmt::format("var(I-SIR) <= var({},{})", label, k), isir, row);
      at_most(fmt::format("var({},{}) <= var(SIR)", label, k), row, sir);
      if (i > 0) {
        at_most(fmt::format("var({},{}) <= var({},{})", label, k, label, ks[i - 1]), row, find(label, ks[i - 1]));
      }
    }
    at_most(fmt::format("var(SR,{0}) <= var(NSSR,{0})", k), find("SR", k), find("NSSR", k));
  }
  return report;
}

}  // namespace semires::bench
