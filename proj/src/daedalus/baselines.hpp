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

#ifndef DAEDALUS_BASELINES_HPP
#define DAEDALUS_BASELINES_HPP

#include <deque>
#include <utility>

#include "daedalus/decision.hpp"

namespace daedalus::baseline {

control::ScalingDecision static_decide(int fixed);

// Threshold autoscaling with horizontal-pod-autoscaler semantics.
struct ThresholdPolicy {
  double target_utilization = 0.8;
  double eval_interval = 15.0;
  // Applies to scale-in only.
  double stabilization_window = 300.0;
  double tolerance = 0.1;
  int min_replicas = 1;
  int max_replicas = 12;

  void validate() const;
};

// ceil(current * observed / target) clamped to [min, max]; inside the
// tolerance band the current count is kept.
int hpa_desired(int current, double avg_cpu_ready_workers, const ThresholdPolicy& policy);

class HpaAutoscaler {
 public:
  explicit HpaAutoscaler(ThresholdPolicy policy);

  // Recommendation at `now`. Scale-outs apply immediately; a scale-in only
  // goes as low as the highest recommendation within the stabilization window.
  int decide(double now, int current, double avg_cpu_ready_workers);

  const ThresholdPolicy& policy() const noexcept { return policy_; }

 private:
  ThresholdPolicy policy_;
  std::deque<std::pair<double, int>> recommendations_;
};

}  // namespace daedalus::baseline

#endif  // DAEDALUS_BASELINES_HPP
