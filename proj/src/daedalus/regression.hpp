// Copyright 2026 The Daedalus Authors
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

#ifndef DAEDALUS_REGRESSION_HPP
#define DAEDALUS_REGRESSION_HPP

#include <cstdint>

namespace daedalus::model {

using WorkerId = std::uint32_t;

// One worker's observation. cpu is a utilization fraction in [0, 1],
// throughput is in tuples per second.
struct MetricSample {
  WorkerId worker_id = 0;
  double timestamp = 0.0;
  double cpu = 0.0;
  double throughput = 0.0;
};

// Minimum CPU variance before the regression line is trusted.
inline constexpr double kMinCpuVariance = 1e-6;

// Samples below this CPU are treated as idle and never enter a regression.
inline constexpr double kIdleCpu = 0.01;

// Minimum coefficient of determination for the fitted line to be used in
// place of the throughput/CPU ratio.
inline constexpr double kMinFitQuality = 0.8;

// Running first and second moments of (cpu, throughput) pairs, updated with
// the bivariate form of Welford's algorithm. Raw samples are never kept.
struct RegressionState {
  std::uint64_t count = 0;
  double mean_cpu = 0.0;
  double mean_tput = 0.0;
  double m2_cpu = 0.0;
  double m2_tput = 0.0;
  double co_moment = 0.0;

  double cpu_variance() const noexcept;
  double covariance() const noexcept;
  double slope() const noexcept;
  double intercept() const noexcept;
  double r_squared() const noexcept;
};

RegressionState update_regression(RegressionState state, const MetricSample& sample) noexcept;

// throughput / cpu. Throws Error(undefined_capacity) when cpu is zero.
double simple_capacity(double throughput, double cpu);

// Throughput on the fitted line at cpu_desired, clamped to >= 0. Throws
// Error(insufficient_data) unless count >= 2 and the CPU variance is at least
// kMinCpuVariance.
double predict_capacity(const RegressionState& state, double cpu_desired);

// True when the line is usable for capacity prediction: enough spread, a
// non-negative slope and a fit quality of at least kMinFitQuality.
bool regression_usable(const RegressionState& state) noexcept;

}  // namespace daedalus::model

#endif  // DAEDALUS_REGRESSION_HPP
