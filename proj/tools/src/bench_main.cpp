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

// bench: runs one tracking or oracle experiment and writes CSV plus a JSON summary.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "semires/bench/config.hpp"
#include "semires/bench/output.hpp"
#include "semires/errors.hpp"

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resampling-scheme experiments on the range-bearing tracking model and the exact oracle"};
  std::string tag;
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  std::size_t threads = 0;
  std::string out_dir;
  app.add_option("experiment", tag, "rmse_vs_k, rmse_vs_noise, variance_sweep or oracle_check")->required();
  app.add_option("--config", config_path, "flat key = value configuration file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  auto* runs_opt = app.add_option("--runs", runs, "Monte Carlo runs (overrides the config)");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (overrides the config)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.set_version_flag("--version", semires::bench::version_string());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  using namespace semires::bench;
  ExperimentConfig config;
  try {
    config = load_config(config_path);
    if (parse_experiment_kind(tag) != config.kind) {
      throw semires::ConfigError("config " + config_path + " describes " + experiment_tag(config.kind) +
                                 ", not " + tag);
    }
    if (*seed_opt) config.seed = seed;
    if (*runs_opt) config.runs = runs;
    if (*threads_opt) config.threads = threads;
    if (*out_opt) config.output_dir = out_dir;
    finalize_config(config);
    config.validate();
  } catch (const std::exception& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return kExitConfigError;
  }

  try {
    const auto output = run_experiment(config);
    write_outputs(config, output);
    std::size_t failed = 0;
    for (const auto& check : output.checks) {
      if (!check.passed) {
        failed += check.gating ? 1 : 0;
        fmt::print(stderr, "{} {}: {}\n", check.gating ? "FAIL" : "note", check.name, check.detail);
      }
    }
    fmt::print("{}: {} checks, {} gating failures; outputs in {}\n", tag, output.checks.size(), failed,
               config.output_dir.string());
    return output.passed() ? 0 : kExitCheckFailure;
  } catch (const semires::ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return kExitConfigError;
  } catch (const semires::EnumerationTooLarge& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "experiment failed: {}\n", e.what());
    return kExitCheckFailure;
  }
}
