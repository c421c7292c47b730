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

#include "daedalus/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>

#include "daedalus/error.hpp"
#include "daedalus/holt_forecaster.hpp"

namespace daedalus::control {

void ControllerConfig::validate() const {
  if (max_scaleout < 1) throw Error(ErrorCode::invalid_argument, "max scale-out must be >= 1");
  if (!(timing.loop_interval > 0.0) || timing.grace_period < 0.0 || timing.recheck_window < 0.0) {
    throw Error(ErrorCode::invalid_argument, "loop timing must be positive");
  }
  if (fallback_window < forecast::kMinFallbackHistory) {
    throw Error(ErrorCode::invalid_argument, "fallback window must cover at least 60 s");
  }
  if (history_retention < std::max<std::size_t>(fallback_window, forecast::kMinFitHistory)) {
    throw Error(ErrorCode::invalid_argument, "history retention shorter than the fallback window");
  }
  recovery.validate();
}

Controller::Controller(ControllerConfig config, ForecasterFactory factory)
    : config_(std::move(config)), factory_(std::move(factory)) {
  config_.validate();
  if (!factory_) {
    factory_ = [] { return std::make_unique<forecast::HoltSeasonalForecaster>(); };
  }
  forecaster_ = factory_();
  knowledge_.recovery = config_.recovery;
  knowledge_.max_scaleout = config_.max_scaleout;
}

void Controller::install_retrained(Knowledge& next, TickReport& report) {
  if (!retrain_.pending()) return;
  try {
    auto model = retrain_.take(config_.synchronous_handoff);
    if (!model) return;
    auto& fresh = *model;
    // Catch the new model up on whatever arrived after its snapshot.
    const double from = fresh->known_until();
    if (from < next.history.end()) {
      forecast::WorkloadSeries missing = next.history.tail(static_cast<std::size_t>(next.history.end() - from));
      fresh->update(missing);
    }
    forecaster_ = std::move(fresh);
    next.health.retraining = false;
    next.health.consecutive_poor = 0;
    report.retrain_installed = true;
  } catch (const std::exception& e) {
    next.health.retraining = false;
    report.error = std::string("retraining failed: ") + e.what();
  }
}

TickReport Controller::tick(MetricsProvider& provider, ScalingExecutor& executor) {
  TickReport report;
  Knowledge next = knowledge_;
  next.loop_count += 1;
  report.loop = next.loop_count;

  install_retrained(next, report);

  // Monitor
  MetricsSnapshot snapshot;
  try {
    snapshot = provider.poll(config_.timing.loop_interval * (1 + missed_polls_));
  } catch (const Error& e) {
    ++missed_polls_;
    knowledge_.loop_count = next.loop_count;
    knowledge_.health = next.health;
    report.skipped = true;
    report.error = e.what();
    return report;
  }
  missed_polls_ = 0;
  report.now = snapshot.now;

  // Analyze
  try {
    analyze(next, snapshot, report);
  } catch (const Error& e) {
    knowledge_.loop_count = next.loop_count;
    report.skipped = true;
    report.error = e.what();
    return report;
  }
  knowledge_ = next;

  // Plan
  if (!next.capacities || !next.forecast) return report;
  DecisionInputs inputs;
  inputs.now = next.now;
  inputs.current = next.current_parallelism;
  inputs.max_scaleout = next.max_scaleout;
  inputs.capacities = *next.capacities;
  inputs.average_workload = next.average_workload;
  inputs.forecast = *next.forecast;
  inputs.consumer_lag = next.consumer_lag;
  inputs.since_last_rescale = next.now - next.last_rescale_time;
  inputs.since_last_action = next.now - next.last_action_time;
  inputs.recent_workload =
      next.history.tail(static_cast<std::size_t>(std::ceil(next.recovery.checkpoint_interval)) + 1);
  inputs.recovery = next.recovery;
  inputs.timing = config_.timing;
  try {
    report.decision = decide(inputs);
  } catch (const Error& e) {
    report.error = e.what();
    return report;
  }
  report.inputs = std::move(inputs);

  // Execute
  execute(next, *report.decision, executor, report);
  knowledge_ = std::move(next);
  return report;
}

void Controller::analyze(Knowledge& next, const MetricsSnapshot& snap, TickReport& report) {
  next.now = snap.now;
  if (snap.parallelism < 1 || snap.parallelism > next.max_scaleout) {
    throw Error(ErrorCode::invalid_argument, "reported parallelism outside [1, max scale-out]");
  }
  if (snap.throughput.size() != snap.workload.size()) {
    throw Error(ErrorCode::invalid_argument, "workload and throughput windows differ in length");
  }

  if (!next.initialized) {
    next.initialized = true;
    next.current_parallelism = snap.parallelism;
  } else if (snap.parallelism != next.current_parallelism) {
    // Rescaled outside this controller.
    next.current_parallelism = snap.parallelism;
    next.last_rescale_time = snap.now;
    next.workers.clear();
  }
  if (snap.uptime < config_.timing.loop_interval && next.now - snap.uptime > next.last_rescale_time) {
    // Restarted (failure) since the last poll.
    next.last_rescale_time = next.now - snap.uptime;
    next.workers.clear();
  }

  // Per-worker regressions.
  std::map<model::WorkerId, model::WorkerModel> workers;
  for (const auto& sample : snap.workers) {
    auto it = next.workers.find(sample.worker_id);
    model::WorkerModel w = it != next.workers.end() ? it->second : model::WorkerModel{};
    w.observe(sample);
    workers.emplace(sample.worker_id, std::move(w));
  }
  next.workers = std::move(workers);

  // Capacities.
  std::vector<model::WorkerModel> models;
  models.reserve(next.workers.size());
  for (const auto& [id, w] : next.workers) models.push_back(w);
  try {
    const double current = model::current_scaleout_capacity(models);
    next.capacities = model::estimate_capacity_table(
        current, next.current_parallelism, next.max_scaleout,
        next.capacities.value_or(model::CapacityTable(next.max_scaleout)), next.now, config_.observed_max_age);
    report.estimated_capacity = current;
  } catch (const Error& e) {
    // Idle or empty window: keep the previous table.
    if (e.code() != ErrorCode::undefined_skew && e.code() != ErrorCode::insufficient_data &&
        e.code() != ErrorCode::undefined_capacity) {
      throw;
    }
  }

  // Workload history.
  next.history.append(snap.workload);
  next.history.keep_last(config_.history_retention);
  if (!snap.workload.empty()) next.average_workload = snap.workload.mean();
  next.consumer_lag = std::max(snap.consumer_lag, 0.0);

  // Score the previous model forecast against what actually arrived.
  std::optional<double> previous_wape;
  if (next.primary_forecast && !snap.workload.empty()) {
    const auto& pf = *next.primary_forecast;
    const double from = std::max(pf.start, next.history.start);
    const double to = std::min({pf.start + config_.timing.loop_interval, next.history.end(),
                                pf.start + static_cast<double>(pf.values.size())});
    if (to > from) {
      const auto n = static_cast<std::size_t>(std::llround(to - from));
      const auto a0 = static_cast<std::size_t>(std::llround(from - next.history.start));
      const auto f0 = static_cast<std::size_t>(std::llround(from - pf.start));
      std::optional<double> score;
      try {
        score = forecast::wape(std::span<const double>(next.history.rates).subspan(a0, n),
                               std::span<const double>(pf.values).subspan(f0, n));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::undefined_score) throw;
      }
      report.wape = score;
      previous_wape = score.value_or(std::numeric_limits<double>::infinity());
      auto quality = forecast::record_quality(next.health, score, config_.poor_wape, config_.retrain_after);
      next.health = quality.health;
      if (quality.retrain) {
        report.retrain_signal = true;
        auto snapshot = next.history.tail(config_.retrain_window);
        auto factory = factory_;
        retrain_.launch([factory, snapshot = std::move(snapshot)]() {
          auto model = factory();
          model->fit(snapshot);
          return model;
        });
      }
    }
  }

  // Forecast.
  forecast::Forecast primary;
  if (!forecaster_->fitted() && next.history.size() >= forecast::kMinFitHistory) {
    forecaster_->fit(next.history.tail(config_.retrain_window));
  } else if (forecaster_->fitted() && next.history.end() > forecaster_->known_until()) {
    forecaster_->update(
        next.history.tail(static_cast<std::size_t>(std::llround(next.history.end() - forecaster_->known_until()))));
  }
  if (forecaster_->fitted()) {
    primary = forecaster_->forecast();
    next.primary_forecast = primary;
    next.forecast = forecast::select_forecast(std::move(primary), previous_wape,
                                              next.history.tail(config_.fallback_window), config_.poor_wape);
  } else if (next.history.size() >= forecast::kMinFallbackHistory) {
    next.primary_forecast.reset();
    next.forecast = forecast::fallback_forecast(next.history.tail(config_.fallback_window));
  }
  if (next.forecast) report.forecast_source = next.forecast->source;

  // Anomaly model and recovery monitoring.
  for (std::size_t i = 0; i < snap.workload.size(); ++i) {
    const double w = snap.workload.rates[i];
    const double tp = snap.throughput[i];
    if (monitor_) {
      if (auto m = monitor_->observe(w, tp)) {
        report.recoveries.push_back(*m);
        if (m->timed_out) ++recovery_timeouts_;
        next.recovery = recovery::adapt_downtime(next.recovery, *m, config_.downtime_smoothing);
        monitor_.reset();
      }
      continue;
    }
    next.anomaly = recovery::update_anomaly(next.anomaly, w, tp);
  }
}

void Controller::execute(Knowledge& next, const ScalingDecision& decision, ScalingExecutor& executor,
                         TickReport& report) {
  if (decision.recovery_target_violated) ++forced_violations_;
  if (!decision.changes(next.current_parallelism)) return;
  const int from = next.current_parallelism;
  try {
    executor.rescale(decision.target);
  } catch (const Error& e) {
    report.error = e.what();
    return;
  }
  report.executed = true;
  report.from = from;
  report.to = decision.target;
  next.current_parallelism = decision.target;
  next.last_rescale_time = next.now;
  next.last_action_time = next.now;
  next.workers.clear();
  if (monitor_) {
    // Superseded before recovery was confirmed.
    ++recovery_timeouts_;
    monitor_.reset();
  }
  if (next.anomaly.count >= recovery::kMinAnomalySamples) {
    monitor_.emplace(next.anomaly, direction_for(decision.target, from),
                     2.0 * next.recovery.target_recovery_time, config_.recovery_confirmation);
  }
}

void Controller::run_loop(MetricsProvider& provider, ScalingExecutor& executor, std::stop_token stop,
                          const std::function<void(const TickReport&)>& on_tick) {
  std::mutex mutex;
  std::condition_variable_any wake;
  const auto interval = std::chrono::duration<double>(config_.timing.loop_interval);
  while (!stop.stop_requested()) {
    const auto started = std::chrono::steady_clock::now();
    const TickReport report = tick(provider, executor);
    if (on_tick) on_tick(report);
    std::unique_lock lock(mutex);
    wake.wait_until(lock, stop, started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval),
                    [] { return false; });
  }
}

}  // namespace daedalus::control
