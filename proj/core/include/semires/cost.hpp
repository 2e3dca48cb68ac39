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

#ifndef SEMIRES_COST_HPP
#define SEMIRES_COST_HPP

#include <cstdint>

namespace semires {

/// Counts of the elementary operations performed by a filter step.
struct CostLedger {
  std::uint64_t proposal_draws = 0;
  std::uint64_t density_evaluations = 0;
  std::uint64_t categorical_draws = 0;

  CostLedger& operator+=(const CostLedger& other) noexcept {
    proposal_draws += other.proposal_draws;
    density_evaluations += other.density_evaluations;
    categorical_draws += other.categorical_draws;
    return *this;
  }

  friend CostLedger operator+(CostLedger lhs, const CostLedger& rhs) noexcept { return lhs += rhs; }
  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

}  // namespace semires

#endif
