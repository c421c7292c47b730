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

#include "daedalus/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "daedalus/error.hpp"

namespace daedalus::baseline {

control::ScalingDecision static_decide(int fixed) {
  if (fixed < 1) throw Error(ErrorCode::invalid_argument, "static scale-out must be >= 1");
  control::ScalingDecision d;
  d.target = fixed;
  d.reason = control::DecisionReason::no_change;
  return d;
}

void ThresholdPolicy::validate() const {
  if (!(target_utilization > 0.0 && target_utilization < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "target utilization must be in (0, 1)");
  }
  if (!(eval_interval > 0.0) || stabilization_window < 0.0 || tolerance < 0.0) {
    throw Error(ErrorCode::invalid_argument, "threshold policy timings must be positive");
  }
  if (min_replicas < 1 || max_replicas < min_replicas) {
    throw Error(ErrorCode::invalid_argument, "replica bounds must satisfy 1 <= min <= max");
  }
}

int hpa_desired(int current, double avg_cpu_ready_workers, const ThresholdPolicy& policy) {
  const double ratio = avg_cpu_ready_workers / policy.target_utilization;
  if (std::abs(ratio - 1.0) <= policy.tolerance) return std::clamp(current, policy.min_replicas, policy.max_replicas);
  // Guard against 4.000000001 style round-up.
  const auto desired = static_cast<int>(std::ceil(static_cast<double>(current) * ratio - 1e-9));
  return std::clamp(desired, policy.min_replicas, policy.max_replicas);
}

HpaAutoscaler::HpaAutoscaler(ThresholdPolicy policy) : policy_(policy) { policy_.validate(); }

int HpaAutoscaler::decide(double now, int current, double avg_cpu_ready_workers) {
  const int desired = hpa_desired(current, avg_cpu_ready_workers, policy_);
  recommendations_.emplace_back(now, desired);
  while (!recommendations_.empty() && recommendations_.front().first < now - policy_.stabilization_window) {
    recommendations_.pop_front();
  }
  if (desired >= current) return desired;
  int highest = desired;
  for (const auto& [t, r] : recommendations_) highest = std::max(highest, r);
  return std::min(highest, current);
}

}  // namespace daedalus::baseline
