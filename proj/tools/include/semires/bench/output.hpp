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

#ifndef SEMIRES_BENCH_OUTPUT_HPP
#define SEMIRES_BENCH_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semires/bench/config.hpp"
#include "semires/bench/experiments.hpp"

namespace semires::bench {

/// Files produced by one experiment plus its overall verdict.
struct ExperimentOutput {
  std::vector<std::pair<std::string, std::string>> files;  ///< (file name, contents), CSV first
  nlohmann::json summary;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const;
};

std::string rmse_csv(const RmseReport& report);
std::string variance_csv(const VarianceReport& report);
std::string oracle_verdicts_csv(const OracleReport& report);
std::string oracle_fits_csv(const OracleReport& report);

/// Version string embedded in summaries.
std::string version_string();

/// Runs the experiment selected by `config.kind` and renders every output.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Writes every file plus `<tag>_summary.json` under config.output_dir.
void write_outputs(const ExperimentConfig& config, const ExperimentOutput& output);

}  // namespace semires::bench

#endif
