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

#ifndef SEMIRES_ERRORS_HPP
#define SEMIRES_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semires {

/// All weights of a particle set are numerically zero.
/**
 * Carries the raw log-weights that triggered the failure and the support
 * generation (0 for the importance-sampling step) so callers can decide on a
 * fallback or record the run as degenerate.
 */
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(std::vector<double> log_weights, std::size_t generation)
      : std::runtime_error("degenerate particle weights at support generation " + std::to_string(generation)),
        log_weights_(std::move(log_weights)),
        generation_(generation) {}

  [[nodiscard]] const std::vector<double>& log_weights() const noexcept { return log_weights_; }
  [[nodiscard]] std::size_t generation() const noexcept { return generation_; }

 private:
  std::vector<double> log_weights_;
  std::size_t generation_;
};

/// A documented precondition of an operation was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid model or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Likelihood evaluated at a state where it is not defined.
class LikelihoodUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact enumeration requested beyond its size guard.
class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace semires

#endif
