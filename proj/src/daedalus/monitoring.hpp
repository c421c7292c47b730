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

#ifndef DAEDALUS_MONITORING_HPP
#define DAEDALUS_MONITORING_HPP

#include <vector>

#include "daedalus/regression.hpp"
#include "daedalus/series.hpp"

namespace daedalus::control {

// One poll of the running job. Worker samples carry the one-minute moving
// average of CPU and the matching average throughput; `workload` and
// `throughput` hold per-second totals for the polled window.
struct MetricsSnapshot {
  double now = 0.0;
  std::vector<model::MetricSample> workers;
  forecast::WorkloadSeries workload;
  std::vector<double> throughput;
  double consumer_lag = 0.0;
  int parallelism = 1;
  double uptime = 0.0;
};

class MetricsProvider {
 public:
  virtual ~MetricsProvider() = default;
  // Metrics for the last `window` seconds. Throws Error(provider_unavailable).
  virtual MetricsSnapshot poll(double window) = 0;
};

class ScalingExecutor {
 public:
  virtual ~ScalingExecutor() = default;
  // Throws Error(executor_failed) when the rescale is not acknowledged.
  virtual void rescale(int target) = 0;
};

}  // namespace daedalus::control

#endif  // DAEDALUS_MONITORING_HPP
