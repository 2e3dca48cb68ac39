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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "semires/bench/config.hpp"
#include "semires/bench/experiments.hpp"
#include "semires/bench/output.hpp"
#include "semires/errors.hpp"

using namespace semires;
using namespace semires::bench;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  auto config = parse_config(in);
  finalize_config(config);
  return config;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("semires_bench_tests_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(SEMIRES_BENCH_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("real values accept multiples of pi") {
  CHECK(parse_real("0.25") == 0.25);
  CHECK(parse_real("pi") == std::numbers::pi);
  CHECK(parse_real("pi/1800") == std::numbers::pi / 1800.0);
  CHECK(parse_real(" 2*pi / 3 ") == 2.0 * std::numbers::pi / 3.0);
  CHECK_THROWS_AS(parse_real("pie"), ConfigError);
  CHECK_THROWS_AS(parse_real("pi/0"), ConfigError);
  CHECK_THROWS_AS(parse_real("abc"), ConfigError);
}

TEST_CASE("config parsing") {
  SUBCASE("defaults and overrides") {
    const auto config = parse("experiment = rmse_vs_k\nparticles = 50\nk = 0, 25, 50 # trailing comment\n");
    CHECK(config.kind == ExperimentKind::kRmseVsK);
    CHECK(config.particles == 50);
    CHECK(config.k_values == std::vector<std::size_t>{0, 25, 50});
    REQUIRE(config.noise_grid.size() == 1);
    CHECK(config.noise_grid[0].sigma_range == 0.1);
    CHECK(config.noise_grid[0].sigma_bearing == std::numbers::pi / 1800.0);
    CHECK_NOTHROW(config.validate());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse("particles = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nruns = 1\nruns = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = nope\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nschemes = SIR, XYZ\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nruns = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nk = 0, 200\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nruns = 0\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nschemes = RM\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_k\nsigma_rho = 5\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("experiment = oracle_check\noracle_particles = 2, 4\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("experiment = rmse_vs_noise\nisir_particles = 70\n"), ConfigError);
  }
  SUBCASE("joint log-spaced noise grid") {
    const auto config = parse("experiment = rmse_vs_noise\nnoise_points = 3\n");
    REQUIRE(config.noise_grid.size() == 3);
    CHECK(config.noise_grid[0].sigma_range == 0.01);
    CHECK(config.noise_grid[0].sigma_bearing == std::numbers::pi / 18000.0);
    CHECK(config.noise_grid[2].sigma_range == 0.3);
    CHECK(config.noise_grid[2].sigma_bearing == std::numbers::pi / 600.0);
    CHECK(config.noise_grid[1].sigma_range == doctest::Approx(std::sqrt(0.01 * 0.3)));
    CHECK(config.noise_grid[1].sigma_bearing / config.noise_grid[1].sigma_range ==
          doctest::Approx(std::numbers::pi / 180.0));
    CHECK_NOTHROW(config.validate());
  }
}

TEST_CASE("budget matching") {
  CHECK(matched_independent_particles(100, 50) == 72);
  CHECK(matched_sis_particles(100, 50) == 2575);
  const auto config = parse("experiment = rmse_vs_noise\n");
  const auto methods = rmse_vs_noise_methods(config);
  REQUIRE(methods.size() == 5);
  const double envelope = 2.0 * 100 + 100 * 50;
  for (const auto& m : methods) {
    const double cost = static_cast<double>(closed_form_cost(m));
    if (m.label == "SR") {
      CHECK(cost == 5050);
    } else if (m.label == "RM") {
      CHECK(cost == 5100);
    } else if (m.label == "I-SIR") {
      CHECK(m.particles == 72);
      CHECK(cost == 5184);
    } else if (m.label == "SIS") {
      CHECK(m.particles == 2575);
      CHECK(m.pre_resampling_estimate);
    } else if (m.label == "NSSR") {
      CHECK(cost == 100 + 99 * 80);
      CHECK_FALSE(m.budget_matched);
      continue;
    }
    CHECK(cost <= envelope);
    CHECK(cost >= 0.49 * envelope);
  }
}

TEST_CASE("rmse_vs_k on a small configuration") {
  auto config = parse(
      "experiment = rmse_vs_k\nparticles = 10\nk = 0, 5, 10\nruns = 6\nhorizon = 4\nseed = 3\n");
  const auto report = run_rmse_vs_k(config);
  REQUIRE(report.rows.size() == 3 + 3 + 3);
  for (const auto& row : report.rows) {
    CHECK(row.proposal_draws == closed_form_cost(row.method));
    CHECK(row.cost_conserved);
    CHECK(row.rmse >= 0.0);
    CHECK(row.run_rmse.size() == 6);
  }
  const std::string csv = rmse_csv(report);
  CHECK(csv.rfind("scheme,k,N,sigma_rho,sigma_theta,rmse,stderr,degenerate_runs,proposal_draws\n", 0) == 0);

  SUBCASE("rerun and thread count leave the CSV unchanged") {
    CHECK(rmse_csv(run_rmse_vs_k(config)) == csv);
    config.threads = 3;
    CHECK(rmse_csv(run_rmse_vs_k(config)) == csv);
  }
  SUBCASE("paired differences vanish against the same row") {
    CHECK(paired_difference_se(report.rows[1], report.rows[1]) == 0.0);
  }
}

TEST_CASE("oracle_check experiment") {
  auto config = parse("experiment = oracle_check\noracle_particles = 2\ninstances = 2\nfit_replicates = 20000\n");
  const auto report = run_oracle_check(config);
  CHECK(report.instances.size() == 2);
  for (const auto& check : report.checks) {
    INFO(check.name, ": ", check.detail);
    CHECK(check.passed);
  }
  config.mutation = true;
  const auto mutated = run_oracle_check(config);
  std::size_t failures = 0;
  for (const auto& check : mutated.checks) {
    failures += check.passed ? 0 : 1;
  }
  CHECK(failures > 0);
}

TEST_CASE("command line exit codes and outputs") {
  const auto dir = scratch_dir("cli");
  const std::string smoke = std::string(SEMIRES_CONFIG_DIR) + "/smoke.conf";
  CHECK(run_cli("rmse_vs_k --config " + smoke + " --runs 3 --out " + dir.string()) == 0);
  CHECK(std::filesystem::exists(dir / "rmse_vs_k.csv"));
  const std::string summary = slurp(dir / "rmse_vs_k_summary.json");
  CHECK(summary.find("\"version\"") != std::string::npos);
  CHECK(summary.find("\"runs\": 3") != std::string::npos);

  CHECK(run_cli("rmse_vs_noise --config " + smoke) == 2);
  CHECK(run_cli("rmse_vs_k --config " + (dir / "missing.conf").string()) == 2);
  CHECK(run_cli("rmse_vs_k") == 2);
  {
    std::ofstream bad(dir / "bad.conf");
    bad << "experiment = oracle_check\noracle_particles = 5\n";
  }
  CHECK(run_cli("oracle_check --config " + (dir / "bad.conf").string()) == 2);
  {
    std::ofstream mutated(dir / "mutated.conf");
    mutated << "experiment = oracle_check\noracle_particles = 2\ninstances = 1\nfit_replicates = 20000\n"
               "mutation = true\n";
  }
  CHECK(run_cli("oracle_check --config " + (dir / "mutated.conf").string() + " --out " + dir.string()) == 1);
  std::filesystem::remove_all(dir);
}
