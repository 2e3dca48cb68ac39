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

#include "semires/bench/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "semires/errors.hpp"

#ifndef SEMIRES_VERSION_STRING
#define SEMIRES_VERSION_STRING "unknown"
#endif

namespace semires::bench {
namespace {

using nlohmann::json;

json checks_json(const std::vector<CheckResult>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"passed", c.passed}, {"gating", c.gating}, {"detail", c.detail}});
  }
  return out;
}

json number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json config_json(const ExperimentConfig& config) {
  json echo = json::object();
  for (const auto& [key, value] : config.entries) {
    echo[key] = value;
  }
  json grid = json::array();
  for (const auto& p : config.noise_grid) {
    grid.push_back({{"sigma_rho", p.sigma_range}, {"sigma_theta", p.sigma_bearing}});
  }
  json resolved = {
      {"experiment", experiment_tag(config.kind)},
      {"particles", config.particles},
      {"k", config.k_values},
      {"schemes", config.schemes},
      {"runs", config.runs},
      {"horizon", config.horizon},
      {"noise_grid", grid},
      {"seed", config.seed},
      {"shared_measurements", config.shared_measurements},
      {"threads", config.threads},
      {"rmse_components", config.position_rmse ? "position" : "full"},
  };
  switch (config.kind) {
    case ExperimentKind::kRmseVsNoise:
      resolved["budget_k"] = config.budget_k;
      resolved["nssr_k"] = config.nssr_k;
      resolved["isir_particles"] = config.isir_particles;
      resolved["sis_particles"] = config.sis_particles;
      break;
    case ExperimentKind::kVarianceSweep:
      resolved["replicates"] = config.replicates;
      resolved["freeze_step"] = config.freeze_step;
      resolved["slack_se"] = config.slack_se;
      resolved["z_threshold"] = config.z_threshold;
      break;
    case ExperimentKind::kOracleCheck:
      resolved["oracle_particles"] = config.oracle_particles;
      resolved["oracle_states"] = config.oracle_states;
      resolved["instances"] = config.instances;
      resolved["fit_instances"] = config.fit_instances;
      resolved["fit_replicates"] = config.fit_replicates;
      resolved["fit_alpha"] = config.fit_alpha;
      resolved["mutation"] = config.mutation;
      break;
    case ExperimentKind::kRmseVsK:
      break;
  }
  return {{"file", echo}, {"resolved", resolved}};
}

json rmse_rows_json(const RmseReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"scheme", row.method.label},
                    {"k", row.method.k()},
                    {"N", row.method.particles},
                    {"sigma_rho", row.noise.sigma_range},
                    {"sigma_theta", row.noise.sigma_bearing},
                    {"rmse", number(row.rmse)},
                    {"stderr", number(row.standard_error)},
                    {"degenerate_runs", row.degenerate_runs},
                    {"proposal_draws", row.proposal_draws},
                    {"budget_matched", row.method.budget_matched},
                    {"pre_resampling_estimate", row.method.pre_resampling_estimate}});
  }
  return rows;
}

}  // namespace

bool ExperimentOutput::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed || !c.gating; });
}

std::string version_string() { return SEMIRES_VERSION_STRING; }

std::string rmse_csv(const RmseReport& report) {
  std::string out = "scheme,k,N,sigma_rho,sigma_theta,rmse,stderr,degenerate_runs,proposal_draws\n";
  for (const auto& row : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.method.label, row.method.k(), row.method.particles,
                       row.noise.sigma_range, row.noise.sigma_bearing, row.rmse, row.standard_error,
                       row.degenerate_runs, row.proposal_draws);
  }
  return out;
}

std::string variance_csv(const VarianceReport& report) {
  std::string out = "scheme,k,N,mean,mean_stderr,variance,variance_stderr,replicates,proposal_draws\n";
  for (const auto& row : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", row.method.label, row.method.k(), row.method.particles,
                       row.estimate.mean(), row.estimate.mean_standard_error(), row.estimate.variance(),
                       row.estimate.variance_standard_error(), row.estimate.count(), row.proposal_draws);
  }
  return out;
}

std::string oracle_verdicts_csv(const OracleReport& report) {
  std::string out = "N,instance,check,lhs,rhs,passed\n";
  std::vector<std::size_t> seen;
  for (const auto& instance : report.instances) {
    const std::size_t index = std::count(seen.begin(), seen.end(), instance.particles);
    seen.push_back(instance.particles);
    for (const auto& v : instance.verdicts) {
      out += fmt::format("{},{},\"{}\",{},{},{}\n", instance.particles, index, v.check, v.lhs, v.rhs,
                         v.passed ? 1 : 0);
    }
  }
  return out;
}

std::string oracle_fits_csv(const OracleReport& report) {
  std::string out = "N,instance,scheme,k,replicates,chi_square,dof,p_value,impossible_outcome,passed\n";
  for (const auto& r : report.fits) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.fit.particles, r.instance, r.fit.scheme, r.fit.k,
                       r.fit.replicates, r.fit.chi_square, r.fit.degrees_of_freedom, r.fit.p_value,
                       r.fit.impossible_outcome ? 1 : 0, r.passed ? 1 : 0);
  }
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput output;
  const std::string tag = experiment_tag(config.kind);
  json results;
  switch (config.kind) {
    case ExperimentKind::kRmseVsK:
    case ExperimentKind::kRmseVsNoise: {
      const auto report =
          config.kind == ExperimentKind::kRmseVsK ? run_rmse_vs_k(config) : run_rmse_vs_noise(config);
      output.files.emplace_back(tag + ".csv", rmse_csv(report));
      output.checks = report.checks;
      results = rmse_rows_json(report);
      break;
    }
    case ExperimentKind::kVarianceSweep: {
      const auto report = run_variance_sweep(config);
      output.files.emplace_back(tag + ".csv", variance_csv(report));
      output.checks = report.checks;
      break;
    }
    case ExperimentKind::kOracleCheck: {
      const auto report = run_oracle_check(config);
      output.files.emplace_back(tag + ".csv", oracle_verdicts_csv(report));
      output.files.emplace_back(tag + "_fits.csv", oracle_fits_csv(report));
      output.checks = report.checks;
      break;
    }
  }
  output.summary = {{"experiment", tag},
                    {"version", version_string()},
                    {"config", config_json(config)},
                    {"checks", checks_json(output.checks)},
                    {"passed", output.passed()}};
  if (!results.is_null()) {
    output.summary["rows"] = results;
  }
  return output;
}

void write_outputs(const ExperimentConfig& config, const ExperimentOutput& output) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + config.output_dir.string() + ": " + ec.message());
  }
  const auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream out(config.output_dir / name, std::ios::binary);
    if (!out) {
      throw ConfigError("cannot write " + (config.output_dir / name).string());
    }
    out << contents;
  };
  for (const auto& [name, contents] : output.files) {
    write(name, contents);
  }
  write(experiment_tag(config.kind) + "_summary.json", output.summary.dump(2) + "\n");
}

}  // namespace semires::bench
