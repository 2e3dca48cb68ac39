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

#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "semires/bench/experiments.hpp"
#include "semires/errors.hpp"
#include "semires/estimators.hpp"
#include "semires/filter.hpp"
#include "semires/tracking.hpp"

namespace semires::bench {
namespace {

using tracking::Trajectory;
using tracking::TrackingModel;
using tracking::TrackingParams;
using tracking::TrackingState;

constexpr std::uint64_t kTrajectoryTag = 0x7472616a65637479ULL;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TrackingParams params_for(const ExperimentConfig& config, const NoisePoint& noise) {
  TrackingParams params;
  params.sigma_range = noise.sigma_range;
  params.sigma_bearing = noise.sigma_bearing;
  params.horizon = config.horizon;
  params.validate();
  return params;
}

TrackingState mean_state(const WeightedParticleSet<TrackingState>& set, bool weighted) {
  TrackingState mean = TrackingState::Zero();
  for (int c = 0; c < 4; ++c) {
    const auto phi = [c](const TrackingState& x) { return x(c); };
    mean(c) = weighted ? estimate_sis(set, phi) : estimate_post(set, phi);
  }
  return mean;
}

RunResult run_filter(const Method& method, const Trajectory& truth, const TrackingModel& model, RngStream rng,
                     bool position_only) {
  ParticleFilter filter(model, method.scheme, method.particles);
  RunResult result;
  double squared = 0.0;
  for (std::size_t t = 0; t < truth.measurements.size(); ++t) {
    std::optional<FilterStep<TrackingState>> step;
    try {
      step.emplace(filter.step(truth.measurements[t], rng));
    } catch (const DegeneracyError&) {
      result.degenerate = true;
      result.rmse = kNaN;
      return result;
    }
    const TrackingState estimate =
        method.pre_resampling_estimate ? mean_state(step->weighted, true) : mean_state(step->posterior(), false);
    const TrackingState error = estimate - truth.states[t];
    squared += position_only ? error(0) * error(0) + error(2) * error(2) : error.squaredNorm();
    result.proposal_draws += step->cost.proposal_draws;
    ++result.steps;
  }
  result.rmse = std::sqrt(squared / static_cast<double>(result.steps));
  return result;
}

RmseRow aggregate(const Method& method, const NoisePoint& noise, const std::vector<RunResult>& runs) {
  RmseRow row;
  row.method = method;
  row.noise = noise;
  RunningMoments moments;
  std::uint64_t draws = 0;
  std::uint64_t steps = 0;
  row.run_rmse.reserve(runs.size());
  for (const auto& run : runs) {
    draws += run.proposal_draws;
    steps += run.steps;
    row.run_rmse.push_back(run.rmse);
    if (run.degenerate) {
      ++row.degenerate_runs;
    } else {
      moments.add(run.rmse);
    }
  }
  row.rmse = moments.count() > 0 ? moments.mean() : kNaN;
  row.standard_error = moments.count() > 1 ? moments.mean_standard_error() : 0.0;
  row.proposal_draws = steps > 0 ? draws / steps : 0;
  row.cost_conserved = draws == steps * closed_form_cost(method);
  return row;
}

std::string row_name(const RmseRow& row) {
  return fmt::format("{}(k={},N={}) at ({:.4g},{:.4g})", row.method.label, row.method.k(), row.method.particles,
                     row.noise.sigma_range, row.noise.sigma_bearing);
}

void add_common_checks(RmseReport& report) {
  for (const auto& row : report.rows) {
    const auto expected = closed_form_cost(row.method);
    report.checks.push_back({"cost " + row_name(row), row.cost_conserved && row.proposal_draws == expected,
                             fmt::format("{} proposal draws per step, closed form {}", row.proposal_draws, expected)});
    if (row.degenerate_runs == row.run_rmse.size()) {
      report.checks.push_back({"survivors " + row_name(row), false, "every run degenerated"});
    }
  }
}

std::vector<RmseRow> sweep_point(const ExperimentConfig& config, const std::vector<Method>& methods,
                                 const NoisePoint& noise, std::size_t grid_index) {
  const TrackingParams params = params_for(config, noise);
  const TrackingModel model(params);
  const RngStream master(config.seed);
  const RngStream trajectories = master.substream(kTrajectoryTag);
  const RngStream filters = master.substream(grid_index);
  std::vector<std::vector<RunResult>> results(methods.size(), std::vector<RunResult>(config.runs));
  parallel_for(config.runs, config.threads, [&](std::size_t run) {
    std::optional<Trajectory> shared;
    if (config.shared_measurements) {
      RngStream rng = trajectories.substream(run);
      shared = tracking::simulate(params, rng);
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      std::optional<Trajectory> own;
      if (!shared) {
        RngStream rng = trajectories.substream(m + 1).substream(run);
        own = tracking::simulate(params, rng);
      }
      const Trajectory& truth = shared ? *shared : *own;
      results[m][run] = run_filter(methods[m], truth, model, filters.substream(m + 1).substream(run),
                                   config.position_rmse);
    }
  });
  std::vector<RmseRow> rows;
  rows.reserve(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    rows.push_back(aggregate(methods[m], noise, results[m]));
  }
  return rows;
}

const RmseRow* find_row(const RmseReport& report, const std::string& label, std::optional<std::size_t> k) {
  for (const auto& row : report.rows) {
    if (row.method.label == label && (!k || row.method.k() == *k)) {
      return &row;
    }
  }
  return nullptr;
}

}  // namespace

double paired_difference_se(const RmseRow& a, const RmseRow& b) {
  RunningMoments diff;
  for (std::size_t r = 0; r < a.run_rmse.size() && r < b.run_rmse.size(); ++r) {
    if (std::isfinite(a.run_rmse[r]) && std::isfinite(b.run_rmse[r])) {
      diff.add(a.run_rmse[r] - b.run_rmse[r]);
    }
  }
  return diff.count() > 1 ? diff.mean_standard_error() : 0.0;
}

RmseReport run_rmse_vs_k(const ExperimentConfig& config) {
  config.validate();
  RmseReport report;
  report.rows = sweep_point(config, rmse_vs_k_methods(config), config.noise_grid.front(), 0);
  add_common_checks(report);

  const std::size_t n = config.particles;
  const auto within = [&](const std::string& name, const RmseRow* a, const RmseRow* b, double relative) {
    if (a && b) {
      const double gap = std::abs(a->rmse - b->rmse) / b->rmse;
      report.checks.push_back({name, gap <= relative, fmt::format("{:.5g} vs {:.5g}, gap {:.2f}%", a->rmse, b->rmse, 100.0 * gap), false});
    }
  };
  const auto overlap = [&](const std::string& name, const RmseRow* a, const RmseRow* b) {
    if (a && b) {
      const double gap = std::abs(a->rmse - b->rmse);
      const double allowed = 2.0 * (a->standard_error + b->standard_error);
      report.checks.push_back({name, gap <= allowed, fmt::format("|{:.5g} - {:.5g}| vs {:.3g}", a->rmse, b->rmse, allowed), false});
    }
  };
  overlap("SR(0) matches SIR", find_row(report, "SR", 0), find_row(report, "SIR", {}));
  overlap("NSSR(0) matches SIR", find_row(report, "NSSR", 0), find_row(report, "SIR", {}));
  overlap("SR(N) matches I-SIR", find_row(report, "SR", n), find_row(report, "I-SIR", {}));
  overlap("NSSR(N) matches I-SIR", find_row(report, "NSSR", n), find_row(report, "I-SIR", {}));
  within("SR(N/2) within 5% of I-SIR", find_row(report, "SR", n / 2), find_row(report, "I-SIR", {}), 0.05);
  within("NSSR(4N/5) within 5% of I-SIR", find_row(report, "NSSR", 4 * n / 5), find_row(report, "I-SIR", {}), 0.05);

  for (const std::string label : {"SR", "NSSR"}) {
    const RmseRow* previous = nullptr;
    for (const auto& row : report.rows) {
      if (row.method.label != label) {
        continue;
      }
      if (previous && previous->method.k() < row.method.k()) {
        const double slack = 3.0 * paired_difference_se(row, *previous);
        report.checks.push_back({fmt::format("{} non-increasing from k={} to k={}", label, previous->method.k(),
                                             row.method.k()),
                                 row.rmse <= previous->rmse + slack,
                                 fmt::format("{:.5g} -> {:.5g}, slack {:.3g}", previous->rmse, row.rmse, slack), false});
      }
      previous = &row;
    }
  }
  return report;
}

RmseReport run_rmse_vs_noise(const ExperimentConfig& config) {
  config.validate();
  RmseReport report;
  const auto methods = rmse_vs_noise_methods(config);
  for (std::size_t g = 0; g < config.noise_grid.size(); ++g) {
    auto rows = sweep_point(config, methods, config.noise_grid[g], g);
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  add_common_checks(report);

  const auto rows_at = [&](std::size_t g) {
    std::vector<const RmseRow*> rows;
    for (std::size_t i = g * methods.size(); i < (g + 1) * methods.size(); ++i) {
      rows.push_back(&report.rows[i]);
    }
    return rows;
  };
  const auto by_label = [](const std::vector<const RmseRow*>& rows, const std::string& label) -> const RmseRow* {
    for (const auto* row : rows) {
      if (row->method.label == label) {
        return row;
      }
    }
    return nullptr;
  };
  const auto degeneracy = [](const RmseRow& row) {
    return static_cast<double>(row.degenerate_runs) / static_cast<double>(row.run_rmse.size());
  };

  if (config.noise_grid.size() >= 2 && !methods.empty()) {
    std::size_t sharpest = 0;
    std::size_t widest = 0;
    for (std::size_t g = 1; g < config.noise_grid.size(); ++g) {
      if (config.noise_grid[g].sigma_range < config.noise_grid[sharpest].sigma_range) {
        sharpest = g;
      }
      if (config.noise_grid[g].sigma_range > config.noise_grid[widest].sigma_range) {
        widest = g;
      }
    }
    const auto informative = rows_at(sharpest);
    const RmseRow* sr = by_label(informative, "SR");
    for (const std::string classical : {"SIS", "SIR"}) {
      const RmseRow* c = by_label(informative, classical);
      if (c && sr) {
        const bool worse = (std::isfinite(c->rmse) && c->rmse > sr->rmse) || !std::isfinite(c->rmse) ||
                           degeneracy(*c) > degeneracy(*sr);
        report.checks.push_back({classical + " worse than SR at the most informative point", worse,
                                 fmt::format("RMSE {:.5g} vs {:.5g}; degenerate {:.1f}% vs {:.1f}%", c->rmse, sr->rmse,
                                             100.0 * degeneracy(*c), 100.0 * degeneracy(*sr)),
                                 false});
      }
    }
    const auto diffuse = rows_at(widest);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto* row : diffuse) {
      lo = std::min(lo, row->rmse);
      hi = std::max(hi, row->rmse);
    }
    const double gap = (hi - lo) / lo;
    report.checks.push_back({"schemes within 15% at the least informative point", gap <= 0.15,
                             fmt::format("RMSE range [{:.5g}, {:.5g}], gap {:.2f}%", lo, hi, 100.0 * gap), false});
  }
  return report;
}

}  // namespace semires::bench
