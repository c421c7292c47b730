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

#ifndef DAEDALUS_CONTROLLER_HPP
#define DAEDALUS_CONTROLLER_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "daedalus/capacity.hpp"
#include "daedalus/decision.hpp"
#include "daedalus/forecasting.hpp"
#include "daedalus/handoff.hpp"
#include "daedalus/monitoring.hpp"
#include "daedalus/recovery.hpp"

namespace daedalus::control {

struct ControllerConfig {
  int max_scaleout = 12;
  Timing timing;
  recovery::RecoveryConfig recovery;
  double poor_wape = forecast::kPoorForecastWape;
  int retrain_after = forecast::kRetrainAfterPoor;
  std::size_t history_retention = forecast::kRetrainWindow;
  std::size_t retrain_window = forecast::kRetrainWindow;
  // Length of the recent window the linear fallback is fitted on.
  std::size_t fallback_window = 300;
  double observed_max_age = model::kDefaultObservedMaxAge;
  double downtime_smoothing = 0.5;
  int recovery_confirmation = recovery::kRecoveryConfirmation;
  // Wait for background results at the start of the next tick instead of
  // polling them. Simulated runs set this so results do not depend on
  // thread timing.
  bool synchronous_handoff = false;

  void validate() const;
};

inline constexpr double kNever = -std::numeric_limits<double>::infinity();

// Shared state of the control loop.
struct Knowledge {
  std::map<model::WorkerId, model::WorkerModel> workers;
  std::optional<model::CapacityTable> capacities;
  forecast::WorkloadSeries history;
  std::optional<forecast::Forecast> forecast;
  // Last output of the forecasting model; scored against the next window.
  std::optional<forecast::Forecast> primary_forecast;
  forecast::ForecasterHealth health;
  recovery::AnomalyState anomaly;
  recovery::RecoveryConfig recovery;
  double now = 0.0;
  double last_rescale_time = kNever;
  double last_action_time = kNever;
  double average_workload = 0.0;
  double consumer_lag = 0.0;
  int current_parallelism = 1;
  int max_scaleout = 1;
  std::uint64_t loop_count = 0;
  bool initialized = false;
};

struct TickReport {
  double now = 0.0;
  std::uint64_t loop = 0;
  bool skipped = false;
  std::string error;
  std::optional<double> wape;
  bool retrain_signal = false;
  bool retrain_installed = false;
  std::optional<forecast::ForecastSource> forecast_source;
  std::optional<double> estimated_capacity;
  std::optional<DecisionInputs> inputs;
  std::optional<ScalingDecision> decision;
  bool executed = false;
  int from = 0;
  int to = 0;
  std::vector<recovery::RecoveryMeasurement> recoveries;
};

class Controller {
 public:
  using ForecasterFactory = std::function<std::unique_ptr<forecast::Forecaster>()>;

  explicit Controller(ControllerConfig config, ForecasterFactory factory = {});

  Controller(const Controller&) = delete;
  Controller& operator=(const Controller&) = delete;

  // One Monitor -> Analyze -> Plan -> Execute pass.
  TickReport tick(MetricsProvider& provider, ScalingExecutor& executor);

  // Ticks every loop interval of wall-clock time until stop is requested.
  void run_loop(MetricsProvider& provider, ScalingExecutor& executor, std::stop_token stop,
                const std::function<void(const TickReport&)>& on_tick = {});

  const Knowledge& knowledge() const noexcept { return knowledge_; }
  const ControllerConfig& config() const noexcept { return config_; }
  int recovery_timeouts() const noexcept { return recovery_timeouts_; }
  int forced_recovery_violations() const noexcept { return forced_violations_; }
  bool monitoring_recovery() const noexcept { return monitor_.has_value(); }

 private:
  void install_retrained(Knowledge& next, TickReport& report);
  void analyze(Knowledge& next, const MetricsSnapshot& snapshot, TickReport& report);
  void execute(Knowledge& next, const ScalingDecision& decision, ScalingExecutor& executor, TickReport& report);

  ControllerConfig config_;
  ForecasterFactory factory_;
  std::unique_ptr<forecast::Forecaster> forecaster_;
  Handoff<std::unique_ptr<forecast::Forecaster>> retrain_;
  std::optional<recovery::RecoveryMonitor> monitor_;
  Knowledge knowledge_;
  int missed_polls_ = 0;
  int recovery_timeouts_ = 0;
  int forced_violations_ = 0;
};

}  // namespace daedalus::control

#endif  // DAEDALUS_CONTROLLER_HPP
