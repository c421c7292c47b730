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

#ifndef DAEDALUS_DECISION_HPP
#define DAEDALUS_DECISION_HPP

#include <limits>
#include <optional>
#include <vector>

#include "daedalus/capacity.hpp"
#include "daedalus/recovery.hpp"
#include "daedalus/series.hpp"

namespace daedalus::control {

enum class DecisionReason { no_change, recent_rescale_ok, scale_out, scale_in, forced_max, grace_period };

const char* to_string(DecisionReason reason) noexcept;

struct Timing {
  double loop_interval = 60.0;
  double grace_period = 180.0;
  double recheck_window = 600.0;
};

// Everything the planner reads, captured as a value so a decision can be
// replayed or checked independently.
struct DecisionInputs {
  double now = 0.0;
  int current = 1;
  int max_scaleout = 1;
  model::CapacityTable capacities;
  double average_workload = 0.0;
  forecast::Forecast forecast;
  double consumer_lag = 0.0;
  double since_last_rescale = std::numeric_limits<double>::infinity();
  double since_last_action = std::numeric_limits<double>::infinity();
  // Recent workload, at least one checkpoint interval long.
  forecast::WorkloadSeries recent_workload;
  recovery::RecoveryConfig recovery;
  Timing timing;
};

struct CandidateCheck {
  int scaleout = 0;
  double capacity = 0.0;
  std::optional<recovery::RecoveryPrediction> recovery;
};

struct ScalingDecision {
  int target = 1;
  DecisionReason reason = DecisionReason::no_change;
  // Predicted recovery time of the chosen scale-out, when one was computed.
  std::optional<double> predicted_recovery;
  // Set when the forced maximum cannot recover within the target.
  bool recovery_target_violated = false;
  std::vector<CandidateCheck> candidates;

  bool changes(int current) const noexcept { return target != current; }
};

recovery::Direction direction_for(int candidate, int current) noexcept;

// Recovery prediction for one candidate scale-out; nullopt when the candidate
// has no positive capacity.
std::optional<recovery::RecoveryPrediction> candidate_recovery(const DecisionInputs& inputs, int candidate);

// The scale-out planner:
//  1. inside the grace period after an action nothing changes;
//  2. shortly after a rescale the current scale-out is kept while it covers
//     the average workload and the forecast until the next loop;
//  3. otherwise the smallest scale-out is chosen whose capacity exceeds the
//     average workload, which recovers within the target, covers the forecast
//     while recovering, is not a scale-in below the consumer lag, and covers
//     the full forecast. The current scale-out stops the search once it
//     qualifies up to the lag check;
//  4. if nothing qualifies, the maximum.
ScalingDecision decide(const DecisionInputs& inputs);

}  // namespace daedalus::control

#endif  // DAEDALUS_DECISION_HPP
