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

#include "semires/tracking.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "semires/errors.hpp"

namespace semires::tracking {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxSimulationAttempts = 16;

bool is_symmetric(const Eigen::Matrix4d& m) { return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()); }

Eigen::Matrix4d block_kron(const Eigen::Matrix2d& block) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  out.block<2, 2>(0, 0) = block;
  out.block<2, 2>(2, 2) = block;
  return out;
}

}  // namespace

Eigen::Matrix4d constant_velocity_transition() {
  Eigen::Matrix2d block;
  block << 1.0, 1.0, 0.0, 1.0;
  return block_kron(block);
}

Eigen::Matrix4d constant_velocity_covariance(double scale) {
  Eigen::Matrix2d block;
  block << 1.0 / 3.0, 1.0 / 2.0, 1.0 / 2.0, 1.0;
  return scale * block_kron(block);
}

void TrackingParams::validate() const {
  if (!(sigma_range > 0.0) || !(sigma_bearing > 0.0) || !std::isfinite(sigma_range) || !std::isfinite(sigma_bearing)) {
    throw ConfigError("measurement noise standard deviations must be positive and finite");
  }
  if (!transition.allFinite() || !initial_state.allFinite()) {
    throw ConfigError("transition matrix and initial state must be finite");
  }
  (void)psd_factor(process_covariance);
  (void)psd_factor(prior_covariance);
}

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

Eigen::Matrix4d psd_factor(const Eigen::Matrix4d& cov) {
  if (!cov.allFinite() || !is_symmetric(cov)) {
    throw ConfigError("covariance must be finite and symmetric");
  }
  Eigen::LLT<Eigen::Matrix4d> llt(cov);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  // Singular PSD: eigen-decompose, then re-triangularize with a QR of the square root.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(cov);
  const double tolerance = 1e-12 * (1.0 + cov.cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -tolerance) {
    throw ConfigError("covariance is not positive semi-definite");
  }
  const Eigen::Vector4d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4d root = eig.eigenvectors() * roots.asDiagonal();
  // root root^T = cov; root^T = Q R gives cov = R^T R with R^T lower triangular.
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(root.transpose());
  Eigen::Matrix4d lower = qr.matrixQR().triangularView<Eigen::Upper>().toDenseMatrix().transpose();
  for (int i = 0; i < 4; ++i) {
    if (lower(i, i) < 0.0) {
      lower.col(i) = -lower.col(i);
    }
  }
  return lower;
}

Measurement polar_measurement(const TrackingState& x) {
  const double cx = x(0);
  const double cy = x(2);
  if (cx == 0.0 && cy == 0.0) {
    throw LikelihoodUndefined("bearing is undefined at the origin");
  }
  return {std::hypot(cx, cy), std::atan2(cy, cx)};
}

TrackingState transition_sample(const TrackingState& x, const TrackingParams& params, RngStream& rng) {
  const Eigen::Matrix4d factor = psd_factor(params.process_covariance);
  TrackingState noise;
  for (int i = 0; i < 4; ++i) {
    noise(i) = rng.normal();
  }
  return params.transition * x + factor * noise;
}

double log_likelihood(const TrackingState& x, const Measurement& y, const TrackingParams& params) {
  const Measurement predicted = polar_measurement(x);
  const double range_residual = (y.range - predicted.range) / params.sigma_range;
  const double bearing_residual = wrap_angle(y.bearing - predicted.bearing) / params.sigma_bearing;
  return -std::log(kTwoPi * params.sigma_range * params.sigma_bearing) -
         0.5 * (range_residual * range_residual + bearing_residual * bearing_residual);
}

TrackingModel::TrackingModel(TrackingParams params)
    : params_(std::move(params)),
      process_factor_(psd_factor(params_.process_covariance)),
      prior_factor_(psd_factor(params_.prior_covariance)),
      log_norm_range_bearing_(-std::log(kTwoPi * params_.sigma_range * params_.sigma_bearing)) {
  params_.validate();
  Eigen::LLT<Eigen::Matrix4d> llt(params_.process_covariance);
  if (llt.info() == Eigen::Success) {
    transition_chol_ = Eigen::Matrix4d(llt.matrixL());
    transition_log_norm_ = -0.5 * (4.0 * std::log(kTwoPi)) - transition_chol_->diagonal().array().log().sum();
  }
}

TrackingState TrackingModel::gaussian(const Eigen::Matrix4d& factor, RngStream& rng) const {
  TrackingState noise;
  for (int i = 0; i < 4; ++i) {
    noise(i) = rng.normal();
  }
  return factor.triangularView<Eigen::Lower>() * noise;
}

TrackingModel::State TrackingModel::sample_prior(RngStream& rng) const {
  return params_.initial_state + gaussian(prior_factor_, rng);
}

TrackingModel::State TrackingModel::sample_proposal(const State& prev, RngStream& rng) const {
  return params_.transition * prev + gaussian(process_factor_, rng);
}

double TrackingModel::log_transition(const State& x, const State& prev) const {
  if (!transition_chol_) {
    throw ConfigError("transition density needs a positive definite process covariance");
  }
  const Eigen::Vector4d residual = x - params_.transition * prev;
  const Eigen::Vector4d whitened = transition_chol_->triangularView<Eigen::Lower>().solve(residual);
  return transition_log_norm_ - 0.5 * whitened.squaredNorm();
}

double TrackingModel::log_likelihood(const State& x, const Observation& y) const {
  const Measurement predicted = polar_measurement(x);
  const double range_residual = (y.range - predicted.range) / params_.sigma_range;
  const double bearing_residual = wrap_angle(y.bearing - predicted.bearing) / params_.sigma_bearing;
  return log_norm_range_bearing_ - 0.5 * (range_residual * range_residual + bearing_residual * bearing_residual);
}

Trajectory simulate(const TrackingParams& params, RngStream& rng) {
  params.validate();
  const Eigen::Matrix4d factor = psd_factor(params.process_covariance);
  for (int attempt = 0; attempt < kMaxSimulationAttempts; ++attempt) {
    RngStream retry = rng.substream(static_cast<std::uint64_t>(attempt));
    RngStream& stream = attempt == 0 ? rng : retry;
    Trajectory trajectory;
    trajectory.states.reserve(params.horizon + 1);
    trajectory.measurements.reserve(params.horizon + 1);
    TrackingState x = params.initial_state;
    bool hit_origin = false;
    for (std::size_t t = 0; t <= params.horizon; ++t) {
      if (t > 0) {
        TrackingState noise;
        for (int i = 0; i < 4; ++i) {
          noise(i) = stream.normal();
        }
        x = params.transition * x + factor * noise;
      }
      if (x(0) == 0.0 && x(2) == 0.0) {
        hit_origin = true;
        break;
      }
      const Measurement exact = polar_measurement(x);
      const double range = exact.range + params.sigma_range * stream.normal();
      const double bearing = wrap_angle(exact.bearing + params.sigma_bearing * stream.normal());
      trajectory.states.push_back(x);
      trajectory.measurements.push_back({range, bearing});
    }
    if (!hit_origin) {
      return trajectory;
    }
  }
  throw std::runtime_error("simulated trajectory kept passing through the origin");
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "t,cx,vx,cy,vy,rho,theta\n";
  for (std::size_t t = 0; t < trajectory.states.size(); ++t) {
    const auto& x = trajectory.states[t];
    const auto& y = trajectory.measurements[t];
    out << t << ',' << x(0) << ',' << x(1) << ',' << x(2) << ',' << x(3) << ',' << y.range << ',' << y.bearing << '\n';
  }
  out.precision(precision);
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,cx,vx,cy,vy,rho,theta") {
    throw ConfigError("trajectory CSV must start with header t,cx,vx,cy,vy,rho,theta");
  }
  Trajectory trajectory;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::stringstream fields(line);
    std::string cell;
    double values[7];
    for (double& value : values) {
      if (!std::getline(fields, cell, ',')) {
        throw ConfigError("trajectory CSV row " + std::to_string(row) + " has fewer than 7 fields");
      }
      value = std::stod(cell);
    }
    if (static_cast<std::size_t>(values[0]) != row) {
      throw ConfigError("trajectory CSV rows must be consecutive from t=0");
    }
    trajectory.states.emplace_back(values[1], values[2], values[3], values[4]);
    trajectory.measurements.push_back({values[5], values[6]});
    ++row;
  }
  return trajectory;
}

}  // namespace semires::tracking
