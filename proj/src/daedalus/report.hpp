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

#ifndef DAEDALUS_REPORT_HPP
#define DAEDALUS_REPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace daedalus::harness {

// One row of the per-second CSV.
struct SecondRow {
  std::int64_t time = 0;
  double workload = 0.0;
  std::int64_t throughput = 0;
  int workers = 0;
  double cpu_avg = 0.0;
  std::int64_t consumer_lag = 0;
  double latency = 0.0;
  // "<reason>:<from>-><to>" for an executed action, empty otherwise.
  std::string event;
};

// One row of the per-loop CSV written for the Daedalus controller.
struct LoopRow {
  std::int64_t time = 0;
  std::uint64_t loop = 0;
  int workers = 0;
  std::optional<double> estimated_capacity;
  double true_capacity = 0.0;
  std::optional<double> wape;
  std::string forecast_source;
  std::string reason;
  int target = 0;
  bool executed = false;
  std::optional<double> predicted_recovery;
  bool retrain_signal = false;
  std::string error;
};

extern const char* const kSecondsHeader;
extern const char* const kLoopsHeader;

// The row as it reads back from the CSV, numbers rounded to the written
// precision.
SecondRow stored(SecondRow row);
LoopRow stored(LoopRow row);

std::string format_second(const SecondRow& row);
std::string format_loop(const LoopRow& row);

void write_seconds_csv(const std::string& path, std::span<const SecondRow> rows);
void write_loops_csv(const std::string& path, std::span<const LoopRow> rows);
std::vector<SecondRow> read_seconds_csv(const std::string& path);
std::vector<LoopRow> read_loops_csv(const std::string& path);

// An executed action and how long the consumer lag took to come back.
struct ActionRecovery {
  std::int64_t time = 0;
  int from = 0;
  int to = 0;
  double pre_lag = 0.0;
  // Seconds from the action until the job is up and the lag is back at or
  // below max(pre_lag, one second of workload); nullopt if the run ended first.
  std::optional<std::int64_t> recovery;
};

std::vector<ActionRecovery> action_recoveries(std::span<const SecondRow> rows);

struct RunSummary {
  std::string name;
  std::string kind;
  bool failed = false;
  std::string error;
  std::int64_t seconds = 0;
  double avg_workers = 0.0;
  double worker_seconds = 0.0;
  double normalized_usage = 0.0;
  double latency_mean = 0.0;
  double latency_p50 = 0.0;
  double latency_p95 = 0.0;
  double latency_p99 = 0.0;
  double latency_max = 0.0;
  int actions = 0;
  int rt_violations = 0;
  double max_recovery = 0.0;
  std::int64_t max_lag = 0;
  int loops = 0;
  int capacity_checks = 0;
  double capacity_error_mean = 0.0;
  double capacity_error_max = 0.0;
  double capacity_within_5pct = 0.0;
  int wape_scores = 0;
  double wape_mean = 0.0;
  double wape_good_fraction = 0.0;
  int fallback_loops = 0;
  int retrain_signals = 0;
};

struct RunMeta {
  std::string scenario;
  std::uint64_t seed = 0;
  std::int64_t duration = 0;
  int max_workers = 0;
  std::string reference;
  std::vector<std::string> controllers;
  // controller name -> key -> value
  std::map<std::string, std::map<std::string, std::string>> details;
};

void write_run_meta(const std::string& path, const RunMeta& meta);
RunMeta read_run_meta(const std::string& path);

// Nearest-rank percentile, p in (0, 100]. 0 for an empty sample.
double percentile(std::vector<double> values, double p);

RunSummary summarize(const std::string& name, const std::string& kind, std::span<const SecondRow> seconds,
                     std::span<const LoopRow> loops, double rt_target);

// Fills normalized_usage against `reference` (a run name), or against
// max_workers at every second when the reference is absent.
void normalize_usage(std::vector<RunSummary>& runs, const std::string& reference, int max_workers);

std::string format_summary(const RunMeta& meta, const std::vector<RunSummary>& runs);

// Re-reads a run directory, recomputes the summary, rewrites summary.txt
// and returns its text.
std::string report_run_directory(const std::string& dir);

}  // namespace daedalus::harness

#endif  // DAEDALUS_REPORT_HPP
