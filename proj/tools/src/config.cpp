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

#include "semires/bench/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "semires/errors.hpp"

namespace semires::bench {
namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) {
    part = trim(part);
    if (!part.empty()) {
      parts.push_back(part);
    }
  }
  return parts;
}

double parse_plain(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
  return static_cast<std::size_t>(parse_unsigned(key, text));
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
  std::vector<std::size_t> values;
  for (const auto& part : split(text, ',')) {
    values.push_back(parse_size(key, part));
  }
  return values;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

const std::set<std::string> kKnownSchemes = {"SIS", "SIR", "I-SIR", "SR", "NSSR", "RM"};

void require_schemes(const ExperimentConfig& config, const std::set<std::string>& allowed) {
  for (const auto& scheme : config.schemes) {
    if (!allowed.contains(scheme)) {
      throw ConfigError("scheme " + scheme + " is not available for " + experiment_tag(config.kind));
    }
  }
}

void require_within(const char* what, double value, double lo, double hi) {
  const double slack = 1e-12 * hi;
  if (!(value > 0.0) || value < lo - slack || value > hi + slack) {
    throw ConfigError(std::string(what) + " outside the configured bounds");
  }
}

void require_single_point(const ExperimentConfig& config) {
  if (config.noise_grid.size() != 1) {
    throw ConfigError(experiment_tag(config.kind) + " takes a single noise point");
  }
  if (config.horizon < 1) {
    throw ConfigError("horizon must be positive");
  }
  for (std::size_t k : config.k_values) {
    if (k > config.particles) {
      throw ConfigError("k = " + std::to_string(k) + " exceeds N = " + std::to_string(config.particles));
    }
  }
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& tag) {
  if (tag == "rmse_vs_k") return ExperimentKind::kRmseVsK;
  if (tag == "rmse_vs_noise") return ExperimentKind::kRmseVsNoise;
  if (tag == "variance_sweep") return ExperimentKind::kVarianceSweep;
  if (tag == "oracle_check") return ExperimentKind::kOracleCheck;
  throw ConfigError("unknown experiment '" + tag + "'");
}

std::string experiment_tag(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kRmseVsK:
      return "rmse_vs_k";
    case ExperimentKind::kRmseVsNoise:
      return "rmse_vs_noise";
    case ExperimentKind::kVarianceSweep:
      return "variance_sweep";
    case ExperimentKind::kOracleCheck:
      return "oracle_check";
  }
  return "unknown";
}

std::size_t matched_independent_particles(std::size_t n, std::size_t k) {
  const std::size_t budget = 2 * n + n * k;
  std::size_t m = 0;
  while ((m + 1) * (m + 1) <= budget) {
    ++m;
  }
  return m;
}

std::size_t matched_sis_particles(std::size_t n, std::size_t k) { return n + (n - 1) * k / 2; }

double parse_real(const std::string& raw) {
  const std::string text = trim(raw);
  const auto pi_at = text.find("pi");
  if (pi_at == std::string::npos) {
    return parse_plain(text);
  }
  double factor = 1.0;
  if (pi_at > 0) {
    const std::string head = text.substr(0, pi_at);
    if (head.back() != '*') {
      throw ConfigError("malformed multiple of pi: '" + text + "'");
    }
    factor = parse_plain(trim(head.substr(0, head.size() - 1)));
  }
  double divisor = 1.0;
  const std::string tail = trim(text.substr(pi_at + 2));
  if (!tail.empty()) {
    if (tail.front() != '/') {
      throw ConfigError("malformed multiple of pi: '" + text + "'");
    }
    divisor = parse_plain(trim(tail.substr(1)));
    if (divisor == 0.0) {
      throw ConfigError("division by zero in '" + text + "'");
    }
  }
  return factor * std::numbers::pi / divisor;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  bool have_experiment = false;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }
    config.entries.emplace_back(key, value);

    if (key == "experiment") {
      config.kind = parse_experiment_kind(value);
      have_experiment = true;
    } else if (key == "particles") {
      config.particles = parse_size(key, value);
    } else if (key == "k") {
      config.k_values = parse_size_list(key, value);
    } else if (key == "schemes") {
      config.schemes = split(value, ',');
      for (const auto& s : config.schemes) {
        if (!kKnownSchemes.contains(s)) {
          throw ConfigError("unknown scheme '" + s + "'");
        }
      }
    } else if (key == "runs") {
      config.runs = parse_size(key, value);
    } else if (key == "horizon") {
      config.horizon = parse_size(key, value);
    } else if (key == "sigma_rho") {
      config.noise.sigma_range = parse_real(value);
    } else if (key == "sigma_theta") {
      config.noise.sigma_bearing = parse_real(value);
    } else if (key == "noise_grid") {
      for (const auto& pair : split(value, ',')) {
        const auto parts = split(pair, ':');
        if (parts.size() != 2) {
          throw ConfigError("noise_grid entries are sigma_rho:sigma_theta pairs");
        }
        config.noise_grid.push_back({parse_real(parts[0]), parse_real(parts[1])});
      }
    } else if (key == "noise_points") {
      config.noise_points = parse_size(key, value);
    } else if (key == "sigma_rho_min") {
      config.sigma_range_min = parse_real(value);
    } else if (key == "sigma_rho_max") {
      config.sigma_range_max = parse_real(value);
    } else if (key == "sigma_theta_min") {
      config.sigma_bearing_min = parse_real(value);
    } else if (key == "sigma_theta_max") {
      config.sigma_bearing_max = parse_real(value);
    } else if (key == "seed") {
      config.seed = parse_unsigned(key, value);
    } else if (key == "shared_measurements") {
      config.shared_measurements = parse_bool(key, value);
    } else if (key == "threads") {
      config.threads = parse_size(key, value);
    } else if (key == "rmse_components") {
      if (value != "position" && value != "full") {
        throw ConfigError("rmse_components must be position or full");
      }
      config.position_rmse = value == "position";
    } else if (key == "budget_k") {
      config.budget_k = parse_size(key, value);
    } else if (key == "nssr_k") {
      config.nssr_k = parse_size(key, value);
    } else if (key == "isir_particles") {
      config.isir_particles = parse_size(key, value);
    } else if (key == "sis_particles") {
      config.sis_particles = parse_size(key, value);
    } else if (key == "replicates") {
      config.replicates = parse_size(key, value);
    } else if (key == "freeze_step") {
      config.freeze_step = parse_size(key, value);
    } else if (key == "slack_se") {
      config.slack_se = parse_real(value);
    } else if (key == "z_threshold") {
      config.z_threshold = parse_real(value);
    } else if (key == "oracle_particles") {
      config.oracle_particles = parse_size_list(key, value);
    } else if (key == "oracle_states") {
      config.oracle_states = parse_size(key, value);
    } else if (key == "instances") {
      config.instances = parse_size(key, value);
    } else if (key == "fit_instances") {
      config.fit_instances = parse_size(key, value);
    } else if (key == "fit_replicates") {
      config.fit_replicates = parse_unsigned(key, value);
    } else if (key == "fit_alpha") {
      config.fit_alpha = parse_real(value);
    } else if (key == "mutation") {
      config.mutation = parse_bool(key, value);
    } else if (key == "output") {
      config.output_dir = value;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!have_experiment) {
    throw ConfigError("config must set experiment");
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  return parse_config(in);
}

void finalize_config(ExperimentConfig& config) {
  if (config.schemes.empty()) {
    switch (config.kind) {
      case ExperimentKind::kRmseVsK:
        config.schemes = {"SIS", "SIR", "I-SIR", "SR", "NSSR"};
        break;
      case ExperimentKind::kRmseVsNoise:
        config.schemes = {"SIS", "I-SIR", "SR", "NSSR", "RM"};
        break;
      case ExperimentKind::kVarianceSweep:
        config.schemes = {"SIR", "I-SIR", "SR", "NSSR"};
        break;
      case ExperimentKind::kOracleCheck:
        config.schemes = {"SIR", "I-SIR", "SR", "NSSR", "RM"};
        break;
    }
  }
  if (config.k_values.empty()) {
    const std::size_t n = config.particles;
    config.k_values = {0, n / 10, n / 4, n / 2, 4 * n / 5, n};
    config.k_values.erase(std::unique(config.k_values.begin(), config.k_values.end()), config.k_values.end());
  }
  if (config.noise_grid.empty()) {
    if (config.noise_points == 1) {
      throw ConfigError("noise_points needs at least two points");
    }
    if (config.noise_points >= 2) {
      const std::size_t p = config.noise_points;
      for (std::size_t i = 0; i < p; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(p - 1);
        NoisePoint point;
        point.sigma_range = i + 1 == p ? config.sigma_range_max
                                       : config.sigma_range_min *
                                             std::pow(config.sigma_range_max / config.sigma_range_min, frac);
        point.sigma_bearing = i + 1 == p ? config.sigma_bearing_max
                                         : config.sigma_bearing_min *
                                               std::pow(config.sigma_bearing_max / config.sigma_bearing_min, frac);
        config.noise_grid.push_back(point);
      }
    } else {
      config.noise_grid = {config.noise};
    }
  }
  if (config.kind == ExperimentKind::kRmseVsNoise) {
    const std::size_t isir = matched_independent_particles(config.particles, config.budget_k);
    const std::size_t sis = matched_sis_particles(config.particles, config.budget_k);
    if (config.isir_particles != 0 && config.isir_particles != isir) {
      throw ConfigError("isir_particles is inconsistent with particles and budget_k (expected " +
                        std::to_string(isir) + ")");
    }
    if (config.sis_particles != 0 && config.sis_particles != sis) {
      throw ConfigError("sis_particles is inconsistent with particles and budget_k (expected " +
                        std::to_string(sis) + ")");
    }
    config.isir_particles = isir;
    config.sis_particles = sis;
  }
}

void ExperimentConfig::validate() const {
  if (runs < 1) {
    throw ConfigError("runs must be at least 1");
  }
  if (particles < 1) {
    throw ConfigError("particles must be at least 1");
  }
  if (threads < 1) {
    throw ConfigError("threads must be at least 1");
  }
  if (!(sigma_range_min > 0.0) || sigma_range_min > sigma_range_max || !(sigma_bearing_min > 0.0) ||
      sigma_bearing_min > sigma_bearing_max) {
    throw ConfigError("noise bounds must be positive with min <= max");
  }
  for (const auto& point : noise_grid) {
    require_within("sigma_rho", point.sigma_range, sigma_range_min, sigma_range_max);
    require_within("sigma_theta", point.sigma_bearing, sigma_bearing_min, sigma_bearing_max);
  }
  switch (kind) {
    case ExperimentKind::kRmseVsK:
      require_schemes(*this, {"SIS", "SIR", "I-SIR", "SR", "NSSR"});
      require_single_point(*this);
      break;
    case ExperimentKind::kVarianceSweep:
      require_schemes(*this, {"SIR", "I-SIR", "SR", "NSSR", "RM"});
      require_single_point(*this);
      if (replicates < 2) {
        throw ConfigError("replicates must be at least 2");
      }
      if (freeze_step < 1 || freeze_step > horizon) {
        throw ConfigError("freeze_step must lie in 1..horizon");
      }
      break;
    case ExperimentKind::kRmseVsNoise:
      require_schemes(*this, {"SIS", "SIR", "I-SIR", "SR", "NSSR", "RM"});
      if (budget_k > particles || nssr_k > particles) {
        throw ConfigError("budget_k and nssr_k must not exceed particles");
      }
      if (isir_particles != matched_independent_particles(particles, budget_k) ||
          sis_particles != matched_sis_particles(particles, budget_k)) {
        throw ConfigError("budget-matched particle counts are inconsistent");
      }
      break;
    case ExperimentKind::kOracleCheck:
      require_schemes(*this, {"SIR", "I-SIR", "SR", "NSSR", "RM"});
      if (oracle_particles.empty() || instances < 1) {
        throw ConfigError("oracle_check needs particle counts and at least one instance");
      }
      for (std::size_t n : oracle_particles) {
        if (n < 1 || n > 3) {
          throw ConfigError("oracle_particles must lie in 1..3 for exact enumeration");
        }
      }
      if (oracle_states < 1 || oracle_states > 3) {
        throw ConfigError("oracle_states must lie in 1..3 for exact enumeration");
      }
      if (!(fit_alpha > 0.0 && fit_alpha < 1.0)) {
        throw ConfigError("fit_alpha must lie in (0, 1)");
      }
      break;
  }
}

}  // namespace semires::bench
