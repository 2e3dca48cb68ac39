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

#include "semires/particle_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semires {

double normalize_log_weights_into(std::span<const double> log_weights, std::vector<double>& out,
                                  std::size_t generation) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity()) {
      throw ContractViolation("log-weight is NaN or +inf");
    }
    max_log = std::max(max_log, lw);
  }
  if (max_log == -std::numeric_limits<double>::infinity()) {
    throw DegeneracyError(std::vector<double>(log_weights.begin(), log_weights.end()), generation);
  }

  out.resize(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    out[i] = std::exp(log_weights[i] - max_log);
    total += out[i];
  }
  for (double& w : out) {
    w /= total;
  }
  return max_log + std::log(total);
}

NormalizedWeights normalize_log_weights(std::span<const double> log_weights, std::size_t generation) {
  NormalizedWeights result;
  result.log_normalizer = normalize_log_weights_into(log_weights, result.weights, generation);
  return result;
}

}  // namespace semires
