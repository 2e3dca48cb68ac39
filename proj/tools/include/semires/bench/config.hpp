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

#ifndef SEMIRES_BENCH_CONFIG_HPP
#define SEMIRES_BENCH_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace semires::bench {

enum class ExperimentKind { kRmseVsK, kRmseVsNoise, kVarianceSweep, kOracleCheck };

ExperimentKind parse_experiment_kind(const std::string& tag);
std::string experiment_tag(ExperimentKind kind);

struct NoisePoint {
  double sigma_range = 0.1;
  double sigma_bearing = std::numbers::pi / 1800.0;
};

/// Everything an experiment needs. Parsed from a flat `key = value` file.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kRmseVsK;
  std::size_t particles = 100;
  std::vector<std::size_t> k_values;
  std::vector<std::string> schemes;
  std::size_t runs = 200;
  std::size_t horizon = 20;
  NoisePoint noise;                ///< single point for rmse_vs_k and variance_sweep
  std::vector<NoisePoint> noise_grid;  ///< explicit grid, or derived from noise_points
  std::size_t noise_points = 0;    ///< joint log-spaced grid between the bounds when non-zero
  double sigma_range_min = 0.01;
  double sigma_range_max = 0.3;
  double sigma_bearing_min = std::numbers::pi / 18000.0;
  double sigma_bearing_max = std::numbers::pi / 600.0;
  std::uint64_t seed = 1;
  bool shared_measurements = true;
  std::size_t threads = 1;
  bool position_rmse = true;  ///< false: velocity components enter the RMSE too

  // rmse_vs_noise budget matching
  std::size_t budget_k = 50;
  std::size_t nssr_k = 80;
  std::size_t isir_particles = 0;  ///< derived when zero
  std::size_t sis_particles = 0;   ///< derived when zero

  // variance_sweep
  std::size_t replicates = 20000;
  std::size_t freeze_step = 5;
  double slack_se = 3.0;
  double z_threshold = 4.0;

  // oracle_check
  std::vector<std::size_t> oracle_particles{2, 3};
  std::size_t oracle_states = 3;
  std::size_t instances = 5;
  std::size_t fit_instances = 1;
  std::uint64_t fit_replicates = 100000;
  double fit_alpha = 1e-3;
  bool mutation = false;

  std::filesystem::path output_dir = ".";

  /// Key/value pairs as read, in file order, for the summary echo.
  std::vector<std::pair<std::string, std::string>> entries;

  /// Throws ConfigError if the configuration is inconsistent.
  void validate() const;
};

/// I-SIR particle count whose N^2 cost matches 2N + N k.
std::size_t matched_independent_particles(std::size_t n, std::size_t k);
/// SIS particle count N + (N - 1) k / 2 matching the SR(k) budget.
std::size_t matched_sis_particles(std::size_t n, std::size_t k);

/// Parses a real number; accepts `pi`, `pi/D`, `A*pi` and `A*pi/D`.
double parse_real(const std::string& text);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fills derived fields (noise grid, matched particle counts, default schemes and k list).
void finalize_config(ExperimentConfig& config);

}  // namespace semires::bench

#endif
