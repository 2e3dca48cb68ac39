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

#include "semires/bench/experiments.hpp"

namespace semires::bench {
namespace {

Method make(std::string label, ResamplingScheme scheme, std::size_t particles, bool pre = false,
            bool matched = true) {
  return Method{std::move(label), scheme, particles, pre, matched};
}

bool wants(const ExperimentConfig& config, const std::string& label) {
  return std::find(config.schemes.begin(), config.schemes.end(), label) != config.schemes.end();
}

}  // namespace

std::uint64_t closed_form_cost(const Method& method) {
  const std::uint64_t n = method.particles;
  const std::uint64_t k = method.k();
  switch (method.scheme.kind()) {
    case SchemeKind::kMultinomial:
      return n;
    case SchemeKind::kIndependent:
      return n * n;
    case SchemeKind::kSemiIndependent:
    case SchemeKind::kNonSequential:
      return n + (n - 1) * k;
    case SchemeKind::kResampleMove:
      return n + n * k;
  }
  return 0;
}

std::vector<Method> rmse_vs_k_methods(const ExperimentConfig& config) {
  const std::size_t n = config.particles;
  std::vector<Method> methods;
  if (wants(config, "SIS")) {
    methods.push_back(make("SIS", ResamplingScheme::multinomial(), n, true));
  }
  if (wants(config, "SIR")) {
    methods.push_back(make("SIR", ResamplingScheme::multinomial(), n));
  }
  if (wants(config, "I-SIR")) {
    methods.push_back(make("I-SIR", ResamplingScheme::independent(), n));
  }
  for (std::size_t k : config.k_values) {
    if (wants(config, "SR")) {
      methods.push_back(make("SR", ResamplingScheme::semi_independent(k), n));
    }
  }
  for (std::size_t k : config.k_values) {
    if (wants(config, "NSSR")) {
      methods.push_back(make("NSSR", ResamplingScheme::non_sequential(k), n));
    }
  }
  return methods;
}

std::vector<Method> rmse_vs_noise_methods(const ExperimentConfig& config) {
  const std::size_t n = config.particles;
  std::vector<Method> methods;
  if (wants(config, "SIS")) {
    methods.push_back(make("SIS", ResamplingScheme::multinomial(), config.sis_particles, true));
  }
  if (wants(config, "SIR")) {
    methods.push_back(make("SIR", ResamplingScheme::multinomial(), config.sis_particles));
  }
  if (wants(config, "I-SIR")) {
    methods.push_back(make("I-SIR", ResamplingScheme::independent(), config.isir_particles));
  }
  if (wants(config, "SR")) {
    methods.push_back(make("SR", ResamplingScheme::semi_independent(config.budget_k), n));
  }
  if (wants(config, "RM")) {
    methods.push_back(make("RM", ResamplingScheme::resample_move(config.budget_k), n));
  }
  if (wants(config, "NSSR")) {
    // Same quality target at a larger, parallelizable cost.
    methods.push_back(make("NSSR", ResamplingScheme::non_sequential(config.nssr_k), n, false, false));
  }
  return methods;
}

}  // namespace semires::bench
