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

#include "daedalus/regression.hpp"

#include <algorithm>

#include "daedalus/error.hpp"

namespace daedalus::model {

double RegressionState::cpu_variance() const noexcept {
  return count == 0 ? 0.0 : m2_cpu / static_cast<double>(count);
}

double RegressionState::covariance() const noexcept {
  return count == 0 ? 0.0 : co_moment / static_cast<double>(count);
}

double RegressionState::slope() const noexcept { return m2_cpu > 0.0 ? co_moment / m2_cpu : 0.0; }

double RegressionState::intercept() const noexcept { return mean_tput - slope() * mean_cpu; }

double RegressionState::r_squared() const noexcept {
  if (m2_cpu <= 0.0 || m2_tput <= 0.0) return 0.0;
  return (co_moment * co_moment) / (m2_cpu * m2_tput);
}

RegressionState update_regression(RegressionState state, const MetricSample& sample) noexcept {
  state.count += 1;
  const double n = static_cast<double>(state.count);
  const double dx = sample.cpu - state.mean_cpu;
  const double dy = sample.throughput - state.mean_tput;
  state.mean_cpu += dx / n;
  state.mean_tput += dy / n;
  state.m2_cpu += dx * (sample.cpu - state.mean_cpu);
  state.m2_tput += dy * (sample.throughput - state.mean_tput);
  state.co_moment += dx * (sample.throughput - state.mean_tput);
  return state;
}

double simple_capacity(double throughput, double cpu) {
  if (!(cpu > 0.0)) {
    throw Error(ErrorCode::undefined_capacity, "capacity undefined for an idle worker (cpu = 0)");
  }
  return throughput / cpu;
}

double predict_capacity(const RegressionState& state, double cpu_desired) {
  if (state.count < 2 || state.cpu_variance() < kMinCpuVariance) {
    throw Error(ErrorCode::insufficient_data, "regression needs at least two spread-out observations");
  }
  const double beta = state.co_moment / state.m2_cpu;
  const double capacity = state.mean_tput - beta * state.mean_cpu + beta * cpu_desired;
  return std::max(capacity, 0.0);
}

bool regression_usable(const RegressionState& state) noexcept {
  return state.count >= 2 && state.cpu_variance() >= kMinCpuVariance && state.co_moment >= 0.0 &&
         state.r_squared() >= kMinFitQuality;
}

}  // namespace daedalus::model
