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

#ifndef SEMIRES_TRACKING_HPP
#define SEMIRES_TRACKING_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <vector>

#include "semires/rng.hpp"

namespace semires::tracking {

/// Position-velocity state (c_x, v_x, c_y, v_y).
using TrackingState = Eigen::Vector4d;

/// Range-bearing observation; bearing in radians, wrapped to (-pi, pi].
struct Measurement {
  double range = 0.0;
  double bearing = 0.0;
};

/// I_2 (x) [[1, 1], [0, 1]].
Eigen::Matrix4d constant_velocity_transition();

/// scale * I_2 (x) [[1/3, 1/2], [1/2, 1]].
Eigen::Matrix4d constant_velocity_covariance(double scale = 10.0);

struct TrackingParams {
  double sigma_range = 0.1;
  double sigma_bearing = std::numbers::pi / 1800.0;
  Eigen::Matrix4d transition = constant_velocity_transition();
  Eigen::Matrix4d process_covariance = constant_velocity_covariance();
  std::size_t horizon = 50;
  TrackingState initial_state = TrackingState(100.0, 1.0, 100.0, 1.0);
  /// Covariance of the filter prior, centered at initial_state.
  Eigen::Matrix4d prior_covariance = constant_velocity_covariance();

  /// Throws ConfigError on non-positive noise or non-PSD covariances.
  void validate() const;
};

/// Maps (-inf, inf) onto (-pi, pi].
double wrap_angle(double angle);

/// Lower-triangular L with L L^T = cov. Accepts singular PSD matrices; throws ConfigError otherwise.
Eigen::Matrix4d psd_factor(const Eigen::Matrix4d& cov);

/// Noise-free range and quadrant-aware bearing of a state. Throws LikelihoodUndefined at the origin.
Measurement polar_measurement(const TrackingState& x);

/// F x + eta, eta ~ N(0, Q).
TrackingState transition_sample(const TrackingState& x, const TrackingParams& params, RngStream& rng);

/// log g(y | x): independent Gaussian range and wrapped-bearing residuals.
double log_likelihood(const TrackingState& x, const Measurement& y, const TrackingParams& params);

/// Range-bearing tracking model with the bootstrap proposal q = f.
class TrackingModel {
 public:
  using State = TrackingState;
  using Observation = Measurement;
  static constexpr bool kBootstrapProposal = true;

  explicit TrackingModel(TrackingParams params);

  [[nodiscard]] State sample_prior(RngStream& rng) const;
  [[nodiscard]] State sample_proposal(const State& prev, RngStream& rng) const;
  /// Gaussian transition log-density; needs a positive definite Q.
  [[nodiscard]] double log_transition(const State& x, const State& prev) const;
  [[nodiscard]] double log_likelihood(const State& x, const Observation& y) const;
  [[nodiscard]] double log_proposal(const State& x, const State& prev) const { return log_transition(x, prev); }

  [[nodiscard]] const TrackingParams& params() const noexcept { return params_; }

 private:
  [[nodiscard]] TrackingState gaussian(const Eigen::Matrix4d& factor, RngStream& rng) const;

  TrackingParams params_;
  Eigen::Matrix4d process_factor_;
  Eigen::Matrix4d prior_factor_;
  double log_norm_range_bearing_;
  std::optional<Eigen::Matrix4d> transition_chol_;
  double transition_log_norm_ = 0.0;
};

/// Ground truth x_{0:T} and measurements y_{0:T}.
struct Trajectory {
  std::vector<TrackingState> states;
  std::vector<Measurement> measurements;
};

/// Simulates a trajectory from params.initial_state. Deterministic given the stream.
Trajectory simulate(const TrackingParams& params, RngStream& rng);

/// CSV layout `t,cx,vx,cy,vy,rho,theta`, one row per step, round-trip precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
Trajectory read_trajectory_csv(std::istream& in);

}  // namespace semires::tracking

#endif
