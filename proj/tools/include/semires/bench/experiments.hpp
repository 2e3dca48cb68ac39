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

#ifndef SEMIRES_BENCH_EXPERIMENTS_HPP
#define SEMIRES_BENCH_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "semires/bench/config.hpp"
#include "semires/oracle.hpp"
#include "semires/resampling.hpp"
#include "semires/stats.hpp"

namespace semires::bench {

/// A named pass/fail check with a human-readable detail line.
/**
 * Gating checks decide the exit status. Advisory checks (the RMSE curve
 * shapes, which are noise-dominated at small run counts) are only reported.
 */
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  bool gating = true;
};

/// One filter configuration inside an RMSE experiment.
struct Method {
  std::string label;  ///< SIS, SIR, I-SIR, SR, NSSR or RM
  ResamplingScheme scheme = ResamplingScheme::multinomial();
  std::size_t particles = 0;
  bool pre_resampling_estimate = false;  ///< SIS: weighted estimate taken before resampling
  bool budget_matched = true;

  [[nodiscard]] std::size_t k() const { return scheme.k(); }
};

struct RmseRow {
  Method method;
  NoisePoint noise;
  double rmse = 0.0;    ///< mean over surviving runs of the time-averaged RMSE
  double standard_error = 0.0;  ///< across surviving runs
  std::size_t degenerate_runs = 0;
  std::uint64_t proposal_draws = 0;  ///< per filter step
  bool cost_conserved = false;       ///< total draws equal steps times the closed form
  std::vector<double> run_rmse;      ///< per run, NaN for degenerate runs
};

struct RmseReport {
  std::vector<RmseRow> rows;
  std::vector<CheckResult> checks;
};

/// Per-step estimate error of one filter run; `degenerate` when weights collapsed.
struct RunResult {
  bool degenerate = false;
  double rmse = 0.0;
  std::uint64_t proposal_draws = 0;
  std::size_t steps = 0;
};

/// Methods swept by run_rmse_vs_k (SR/NSSR expanded over the k list).
std::vector<Method> rmse_vs_k_methods(const ExperimentConfig& config);
/// Budget-matched methods of run_rmse_vs_noise.
std::vector<Method> rmse_vs_noise_methods(const ExperimentConfig& config);

RmseReport run_rmse_vs_k(const ExperimentConfig& config);
/// Checks compare the grid points with the smallest and largest sigma_rho.
RmseReport run_rmse_vs_noise(const ExperimentConfig& config);

/// Standard error of the run-paired RMSE difference a - b over runs where both survived.
double paired_difference_se(const RmseRow& a, const RmseRow& b);

/// Closed-form per-step proposal draws of `method`.
std::uint64_t closed_form_cost(const Method& method);

struct VarianceRow {
  Method method;
  RunningMoments estimate;  ///< moments of the post-resampling estimate over replicates
  std::uint64_t proposal_draws = 0;  ///< per replicate (importance sampling plus resampling)
};

struct VarianceReport {
  std::vector<VarianceRow> rows;
  std::vector<CheckResult> checks;
};

/// Repeats one resampling step from a frozen ancestor set; phi is the x position.
VarianceReport run_variance_sweep(const ExperimentConfig& config);

struct FitRecord {
  std::size_t instance = 0;
  oracle::FitReport fit;
  bool passed = false;
};

struct OracleReport {
  std::vector<oracle::PropositionReport> instances;
  std::vector<FitRecord> fits;
  std::vector<CheckResult> checks;
};

OracleReport run_oracle_check(const ExperimentConfig& config);

/// Runs `fn(i)` for i in [0, count) on `threads` workers. Results must be written by index.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn);

}  // namespace semires::bench

#include "semires/bench/detail/parallel_for.hpp"

#endif
