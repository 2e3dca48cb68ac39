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

#include "semires/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

namespace semires {

void CompensatedSum::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

void RunningMoments::add(double value) noexcept {
  const auto n1 = static_cast<double>(count_);
  ++count_;
  const auto n = static_cast<double>(count_);
  const double delta = value - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * m2_ - 4 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2) - 3 * delta_n * m2_;
  m2_ += term1;
}

double RunningMoments::variance() const noexcept {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningMoments::standard_deviation() const noexcept { return std::sqrt(variance()); }

double RunningMoments::mean_standard_error() const noexcept {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

double RunningMoments::variance_standard_error() const noexcept {
  if (count_ < 2) {
    return 0.0;
  }
  const auto n = static_cast<double>(count_);
  const double central2 = m2_ / n;
  const double central4 = m4_ / n;
  return std::sqrt(std::max(central4 - central2 * central2, 0.0) / n);
}

double chi_square_upper_tail(double statistic, double dof) {
  if (dof <= 0.0) {
    return statistic > 0.0 ? 0.0 : 1.0;
  }
  if (statistic <= 0.0) {
    return 1.0;
  }
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

double two_sample_z(const RunningMoments& a, const RunningMoments& b) {
  const double se = std::hypot(a.mean_standard_error(), b.mean_standard_error());
  if (se == 0.0) {
    return a.mean() == b.mean() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (a.mean() - b.mean()) / se;
}

}  // namespace semires
