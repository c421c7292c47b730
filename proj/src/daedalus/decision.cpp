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

#include "daedalus/decision.hpp"

#include <cmath>

#include "daedalus/error.hpp"

namespace daedalus::control {

const char* to_string(DecisionReason reason) noexcept {
  switch (reason) {
    case DecisionReason::no_change: return "no-change";
    case DecisionReason::recent_rescale_ok: return "recent-rescale-ok";
    case DecisionReason::scale_out: return "scale-out";
    case DecisionReason::scale_in: return "scale-in";
    case DecisionReason::forced_max: return "forced-max";
    case DecisionReason::grace_period: return "grace-period";
  }
  return "unknown";
}

recovery::Direction direction_for(int candidate, int current) noexcept {
  if (candidate > current) return recovery::Direction::scale_out;
  if (candidate < current) return recovery::Direction::scale_in;
  return recovery::Direction::failure;
}

std::optional<recovery::RecoveryPrediction> candidate_recovery(const DecisionInputs& inputs, int candidate) {
  const double capacity = inputs.capacities.capacity(candidate);
  if (!(capacity > 0.0)) return std::nullopt;
  const auto direction = direction_for(candidate, inputs.current);
  const double backlog =
      recovery::accumulated_backlog(inputs.recent_workload, inputs.forecast, inputs.recovery, direction);
  return recovery::predict_recovery_time(capacity, inputs.forecast, backlog, inputs.recovery.downtime(direction));
}

namespace {

std::size_t seconds_covering(double duration) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(duration)));
}

}  // namespace

ScalingDecision decide(const DecisionInputs& in) {
  if (in.current < 1 || in.current > in.max_scaleout || in.capacities.max_scaleout() != in.max_scaleout) {
    throw Error(ErrorCode::invalid_argument, "decision inputs are inconsistent with the maximum scale-out");
  }
  ScalingDecision out;
  out.target = in.current;

  if (in.since_last_action < in.timing.grace_period) {
    out.reason = DecisionReason::grace_period;
    return out;
  }

  const double current_capacity = in.capacities.capacity(in.current);
  const auto until_next_loop = seconds_covering(in.timing.loop_interval);
  if (in.since_last_rescale < in.timing.recheck_window && current_capacity > in.average_workload &&
      current_capacity > in.forecast.max_over(until_next_loop)) {
    out.reason = DecisionReason::recent_rescale_ok;
    return out;
  }

  const double forecast_max = in.forecast.max();
  for (int i = 1; i <= in.max_scaleout; ++i) {
    const double capacity = in.capacities.capacity(i);
    CandidateCheck check{i, capacity, std::nullopt};
    if (!(capacity > in.average_workload)) {
      out.candidates.push_back(check);
      continue;
    }
    check.recovery = candidate_recovery(in, i);
    out.candidates.push_back(check);
    if (!check.recovery || !check.recovery->feasible ||
        check.recovery->total > in.recovery.target_recovery_time) {
      continue;
    }
    const double rt = check.recovery->total;
    if (capacity < in.forecast.max_over(seconds_covering(rt))) continue;

    if (i == in.current) {
      out.reason = DecisionReason::no_change;
      out.predicted_recovery = rt;
      return out;
    }
    if (i < in.current && capacity < in.consumer_lag) continue;
    if (capacity > forecast_max) {
      out.target = i;
      out.reason = i > in.current ? DecisionReason::scale_out : DecisionReason::scale_in;
      out.predicted_recovery = rt;
      return out;
    }
  }

  out.target = in.max_scaleout;
  out.reason = DecisionReason::forced_max;
  if (const auto rt = candidate_recovery(in, in.max_scaleout)) {
    out.predicted_recovery = rt->total;
    out.recovery_target_violated = !rt->feasible || rt->total > in.recovery.target_recovery_time;
  } else {
    out.recovery_target_violated = true;
  }
  return out;
}

}  // namespace daedalus::control
