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

#include "daedalus/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "daedalus/error.hpp"

namespace daedalus::recovery {

const char* to_string(Direction direction) noexcept {
  switch (direction) {
    case Direction::scale_out: return "scale-out";
    case Direction::scale_in: return "scale-in";
    case Direction::failure: return "failure";
  }
  return "unknown";
}

double RecoveryConfig::downtime(Direction direction) const noexcept {
  return direction == Direction::scale_in ? downtime_scale_in : downtime_scale_out;
}

void RecoveryConfig::validate() const {
  if (!(checkpoint_interval > 0.0 && downtime_scale_out > 0.0 && downtime_scale_in > 0.0 &&
        target_recovery_time > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "recovery settings must be positive");
  }
  if (target_recovery_time < std::max(downtime_scale_out, downtime_scale_in)) {
    throw Error(ErrorCode::invalid_argument, "target recovery time is shorter than the expected downtime");
  }
}

namespace {

// Weighted sum over [from, to) of a unit-step sequence.
double window_sum(std::span<const double> values, double from, double to) noexcept {
  from = std::max(from, 0.0);
  to = std::min(to, static_cast<double>(values.size()));
  double sum = 0.0;
  for (auto k = static_cast<std::size_t>(std::floor(from)); static_cast<double>(k) < to; ++k) {
    const double lo = std::max(from, static_cast<double>(k));
    const double hi = std::min(to, static_cast<double>(k) + 1.0);
    if (hi > lo) sum += values[k] * (hi - lo);
  }
  return sum;
}

}  // namespace

double forecast_sum(const forecast::Forecast& forecast, double from, double duration) noexcept {
  return window_sum(forecast.values, from, from + duration);
}

double accumulated_backlog(const forecast::WorkloadSeries& history, const forecast::Forecast& forecast,
                           double checkpoint_interval, double downtime) {
  const auto n = static_cast<double>(history.size());
  if (n + 1e-9 < checkpoint_interval) {
    throw Error(ErrorCode::insufficient_history, "history shorter than one checkpoint interval");
  }
  const double reprocessed = window_sum(history.rates, n - checkpoint_interval, n);
  return reprocessed + forecast_sum(forecast, 0.0, downtime);
}

double accumulated_backlog(const forecast::WorkloadSeries& history, const forecast::Forecast& forecast,
                           const RecoveryConfig& config, Direction direction) {
  return accumulated_backlog(history, forecast, config.checkpoint_interval, config.downtime(direction));
}

RecoveryPrediction predict_recovery_time(double scaleout_capacity, const forecast::Forecast& forecast,
                                         double backlog, double downtime) {
  if (!(scaleout_capacity > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "recovery prediction needs a positive capacity");
  }
  RecoveryPrediction out;
  out.backlog = backlog;
  if (backlog <= 0.0) {
    out.total = downtime;
    out.feasible = true;
    return out;
  }
  const auto first = static_cast<std::size_t>(std::max<long long>(0, std::llround(downtime)));
  double caught_up = 0.0;
  for (std::size_t s = first; s < forecast.values.size(); ++s) {
    caught_up += std::max(scaleout_capacity - forecast.values[s], 0.0);
    if (caught_up >= backlog) {
      out.total = downtime + static_cast<double>(s - first + 1);
      out.feasible = true;
      return out;
    }
  }
  return out;
}

AnomalyState update_anomaly(AnomalyState state, double workload, double throughput) noexcept {
  const double diff = workload - throughput;
  state.count += 1;
  const double n = static_cast<double>(state.count);
  const double delta = diff - state.mean;
  state.mean += delta / n;
  state.m2 += delta * (diff - state.mean);
  state.mean_workload += (workload - state.mean_workload) / n;
  return state;
}

bool is_anomalous(const AnomalyState& state, double workload, double throughput) {
  if (state.count < kMinAnomalySamples) {
    throw Error(ErrorCode::insufficient_samples, "anomaly detector needs at least 30 observations");
  }
  const double threshold = std::max(std::sqrt(state.variance()), kAbsoluteFloorFraction * state.mean_workload);
  return std::abs((workload - throughput) - state.mean) > threshold;
}

RecoveryMonitor::RecoveryMonitor(AnomalyState baseline, Direction direction, double timeout, int confirmation)
    : baseline_(baseline), direction_(direction), timeout_(timeout), confirmation_(std::max(confirmation, 1)) {
  if (baseline_.count < kMinAnomalySamples) {
    throw Error(ErrorCode::insufficient_samples, "recovery monitor needs a trained anomaly baseline");
  }
}

std::optional<RecoveryMeasurement> RecoveryMonitor::observe(double workload, double throughput) {
  if (done_) return std::nullopt;
  const long second = elapsed_++;
  const bool anomalous = is_anomalous(baseline_, workload, throughput);
  const bool deficit = anomalous && (workload - throughput) > baseline_.mean;

  if (in_initial_window_) {
    if (deficit) {
      downtime_ = second + 1;
    } else {
      in_initial_window_ = false;
    }
  }
  if (anomalous) {
    normal_run_ = 0;
  } else {
    if (normal_run_ == 0) candidate_ = second;
    if (++normal_run_ >= confirmation_) {
      done_ = true;
      return RecoveryMeasurement{direction_, static_cast<double>(downtime_), static_cast<double>(candidate_), false};
    }
  }
  if (static_cast<double>(elapsed_) >= timeout_) {
    done_ = true;
    return RecoveryMeasurement{direction_, static_cast<double>(downtime_), timeout_, true};
  }
  return std::nullopt;
}

RecoveryMeasurement RecoveryMonitor::partial() const noexcept {
  return RecoveryMeasurement{direction_, static_cast<double>(downtime_), static_cast<double>(elapsed_), true};
}

RecoveryMeasurement monitor_recovery(std::span<const double> workload, std::span<const double> throughput,
                                     const AnomalyState& baseline, Direction direction, double timeout,
                                     int confirmation) {
  if (workload.size() != throughput.size()) {
    throw Error(ErrorCode::invalid_argument, "workload and throughput streams differ in length");
  }
  RecoveryMonitor monitor(baseline, direction, timeout, confirmation);
  for (std::size_t i = 0; i < workload.size(); ++i) {
    if (auto m = monitor.observe(workload[i], throughput[i])) return *m;
  }
  return monitor.partial();
}

RecoveryConfig adapt_downtime(RecoveryConfig config, const RecoveryMeasurement& measurement, double weight) noexcept {
  if (measurement.timed_out || !(measurement.downtime > 0.0)) return config;
  double& expected =
      measurement.direction == Direction::scale_in ? config.downtime_scale_in : config.downtime_scale_out;
  expected = (1.0 - weight) * expected + weight * measurement.downtime;
  return config;
}

}  // namespace daedalus::recovery
