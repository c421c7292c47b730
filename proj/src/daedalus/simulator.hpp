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

#ifndef DAEDALUS_SIMULATOR_HPP
#define DAEDALUS_SIMULATOR_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "daedalus/monitoring.hpp"

namespace daedalus::sim {

enum class KeyDistribution { uniform, zipf, explicit_weights };

// hash: keys go to one of `key_groups` groups by hash, and groups are split
// into contiguous ranges per worker. round_robin: key k goes to worker k mod n.
enum class Assignment { hash, round_robin };

struct ClusterSpec {
  int max_workers = 12;
  // Tuples/s one worker sustains at 100% CPU before jitter.
  double unit_capacity = 5000.0;
  // Per-worker capacity is drawn uniformly from unit * [1 - jitter, 1 + jitter].
  double capacity_jitter = 0.05;
  int key_count = 1000;
  KeyDistribution distribution = KeyDistribution::uniform;
  double zipf_exponent = 1.0;
  std::vector<double> explicit_weights;
  Assignment assignment = Assignment::hash;
  int key_groups = 128;
  double checkpoint_interval = 10.0;
  double downtime_out = 30.0;
  double downtime_in = 15.0;
  double cpu_noise = 0.02;
  double base_latency = 0.2;

  void validate() const;
  // Normalised per-key weights.
  std::vector<double> key_weights() const;
};

// Share of the key weight each of `workers` workers receives.
std::vector<double> worker_shares(const ClusterSpec& spec, int workers);

// Sustainable throughput with the given per-worker shares and capacities:
// the worker that saturates first caps everyone.
double bottleneck_capacity(const std::vector<double>& shares, const std::vector<double>& capacities);

struct SecondRecord {
  std::int64_t time = 0;
  std::int64_t arrivals = 0;
  std::int64_t processed = 0;
  int workers = 0;
  bool down = false;
  std::int64_t backlog = 0;
  double latency = 0.0;
  double cpu_avg = 0.0;
  std::vector<double> worker_cpu;
  std::vector<double> worker_throughput;
};

// Discrete-time model of a keyed stream processing job under backpressure:
// the source is consumed at the rate of the bottleneck worker, and every
// worker processes its key share of what is consumed.
class Simulator {
 public:
  Simulator(ClusterSpec spec, int initial_workers, std::uint64_t seed);

  // Advances one second with `workload_rate` tuples/s arriving.
  const SecondRecord& step(double workload_rate);
  // Restarts the job at `target` workers (same count restarts too). Throws
  // Error(invalid_target) outside [1, max_workers].
  void rescale(int target);

  double ground_truth_capacity() const;
  // For the active scale-out this uses the drawn capacities; other scale-outs
  // use the unit capacity.
  double ground_truth_capacity(int scaleout) const;

  const ClusterSpec& spec() const noexcept { return spec_; }
  std::int64_t now() const noexcept { return now_; }
  int active_workers() const noexcept { return active_; }
  bool down() const noexcept { return now_ < down_until_; }
  std::int64_t backlog() const noexcept { return backlog_; }
  std::int64_t cumulative_arrivals() const noexcept { return arrivals_total_; }
  std::int64_t cumulative_processed() const noexcept { return processed_total_; }
  double time_since_checkpoint() const noexcept { return checkpoint_clock_; }
  std::int64_t last_restart() const noexcept { return last_restart_; }
  const std::vector<double>& shares() const noexcept { return shares_; }
  const std::vector<double>& capacities() const noexcept { return capacities_; }
  const std::vector<SecondRecord>& records() const noexcept { return records_; }

  // Sets the checkpoint clock and the tuples processed since the last
  // checkpoint, for scripted restarts.
  void set_checkpoint_phase(double clock, std::int64_t processed_since);

 private:
  void assign(int workers);

  ClusterSpec spec_;
  std::mt19937_64 rng_;
  int active_ = 1;
  std::vector<double> shares_;
  std::vector<double> capacities_;
  std::int64_t now_ = 0;
  std::int64_t down_until_ = 0;
  std::int64_t last_restart_ = 0;
  std::int64_t backlog_ = 0;
  std::int64_t arrivals_total_ = 0;
  std::int64_t processed_total_ = 0;
  std::int64_t processed_since_checkpoint_ = 0;
  double checkpoint_clock_ = 0.0;
  std::vector<SecondRecord> records_;
};

// MetricsProvider over a simulator's recorded seconds.
class SimulatorMetricsProvider final : public control::MetricsProvider {
 public:
  explicit SimulatorMetricsProvider(const Simulator& simulator, double cpu_window = 60.0)
      : sim_(simulator), cpu_window_(cpu_window) {}

  control::MetricsSnapshot poll(double window) override;

 private:
  const Simulator& sim_;
  double cpu_window_;
};

class SimulatorExecutor final : public control::ScalingExecutor {
 public:
  explicit SimulatorExecutor(Simulator& simulator) : sim_(simulator) {}

  void rescale(int target) override;
  int actions() const noexcept { return actions_; }

 private:
  Simulator& sim_;
  int actions_ = 0;
};

}  // namespace daedalus::sim

#endif  // DAEDALUS_SIMULATOR_HPP
