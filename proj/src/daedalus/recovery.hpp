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

#ifndef DAEDALUS_RECOVERY_HPP
#define DAEDALUS_RECOVERY_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "daedalus/series.hpp"

namespace daedalus::recovery {

enum class Direction { scale_out, scale_in, failure };

const char* to_string(Direction direction) noexcept;

struct RecoveryConfig {
  double checkpoint_interval = 10.0;
  double downtime_scale_out = 30.0;
  double downtime_scale_in = 15.0;
  double target_recovery_time = 600.0;

  // Failures restart the job like a scale-out does.
  double downtime(Direction direction) const noexcept;
  void validate() const;
};

inline constexpr double kInfeasibleRecovery = std::numeric_limits<double>::infinity();

struct RecoveryPrediction {
  // Seconds from processing stop until the backlog is cleared, downtime
  // included. kInfeasibleRecovery when the forecast horizon is not enough.
  double total = kInfeasibleRecovery;
  double backlog = 0.0;
  bool feasible = false;
};

// Worst-case backlog after a restart: every tuple of the last full checkpoint
// interval is reprocessed, plus the forecast arrivals while the job is down.
// Throws Error(insufficient_history) when the history is shorter than the
// checkpoint interval.
double accumulated_backlog(const forecast::WorkloadSeries& history, const forecast::Forecast& forecast,
                           double checkpoint_interval, double downtime);
double accumulated_backlog(const forecast::WorkloadSeries& history, const forecast::Forecast& forecast,
                           const RecoveryConfig& config, Direction direction);

// Sum of forecast values over [from, from + duration) seconds after the
// forecast start, with fractional seconds weighted.
double forecast_sum(const forecast::Forecast& forecast, double from, double duration) noexcept;

// Catch-up starts once the job is back up; each second contributes
// max(capacity - forecast, 0) until the backlog is covered.
RecoveryPrediction predict_recovery_time(double scaleout_capacity, const forecast::Forecast& forecast,
                                         double backlog, double downtime);

// Welford mean/variance of (workload - throughput), plus the mean workload
// that scales the absolute detection floor.
struct AnomalyState {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double mean_workload = 0.0;

  double variance() const noexcept { return count == 0 ? 0.0 : m2 / static_cast<double>(count); }
};

inline constexpr std::uint64_t kMinAnomalySamples = 30;
inline constexpr double kAbsoluteFloorFraction = 0.01;

AnomalyState update_anomaly(AnomalyState state, double workload, double throughput) noexcept;

// |diff - mean| > max(stddev, 1% of mean workload). Throws
// Error(insufficient_samples) before kMinAnomalySamples observations.
bool is_anomalous(const AnomalyState& state, double workload, double throughput);

struct RecoveryMeasurement {
  Direction direction = Direction::scale_out;
  double downtime = 0.0;
  double recovery = 0.0;
  bool timed_out = false;
};

inline constexpr int kRecoveryConfirmation = 10;

// Watches (workload, throughput) seconds after a scaling action. Downtime is
// the initial run of throughput-deficit anomalies; recovery is the first
// normal second followed by `confirmation` normal seconds in a row.
class RecoveryMonitor {
 public:
  RecoveryMonitor(AnomalyState baseline, Direction direction, double timeout,
                  int confirmation = kRecoveryConfirmation);

  // Feeds one second; returns the measurement once recovery is confirmed or
  // the timeout expires.
  std::optional<RecoveryMeasurement> observe(double workload, double throughput);
  bool done() const noexcept { return done_; }
  // Measurement so far for a stream that ended early, flagged as timed out.
  RecoveryMeasurement partial() const noexcept;
  double elapsed() const noexcept { return static_cast<double>(elapsed_); }

 private:
  AnomalyState baseline_;
  Direction direction_;
  double timeout_;
  int confirmation_;
  long elapsed_ = 0;
  bool in_initial_window_ = true;
  long downtime_ = 0;
  long normal_run_ = 0;
  long candidate_ = 0;
  bool done_ = false;
};

// Runs a monitor over a recorded stream. A stream that ends before recovery
// is confirmed or the timeout hits reports timed_out with recovery equal to
// the stream length.
RecoveryMeasurement monitor_recovery(std::span<const double> workload, std::span<const double> throughput,
                                     const AnomalyState& baseline, Direction direction, double timeout,
                                     int confirmation = kRecoveryConfirmation);

// Exponential smoothing of the expected downtime for the measured direction.
RecoveryConfig adapt_downtime(RecoveryConfig config, const RecoveryMeasurement& measurement,
                              double weight = 0.5) noexcept;

}  // namespace daedalus::recovery

#endif  // DAEDALUS_RECOVERY_HPP
