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

#ifndef SEMIRES_STATS_HPP
#define SEMIRES_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace semires {

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

  CompensatedSum& operator+=(double value) noexcept {
    add(value);
    return *this;
  }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Streaming mean/variance with the fourth central moment, for standard errors of both.
class RunningMoments {
 public:
  void add(double value) noexcept;

  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  /// Unbiased sample variance.
  [[nodiscard]] double variance() const noexcept;
  [[nodiscard]] double standard_deviation() const noexcept;
  /// Standard error of the mean.
  [[nodiscard]] double mean_standard_error() const noexcept;
  /// Large-sample standard error of the variance, sqrt((m4 - m2^2) / n).
  [[nodiscard]] double variance_standard_error() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// Upper tail P(X >= statistic) of a chi-square law with `dof` degrees of freedom.
double chi_square_upper_tail(double statistic, double dof);

/// z statistic for the difference of two independent sample means.
double two_sample_z(const RunningMoments& a, const RunningMoments& b);

}  // namespace semires

#endif
