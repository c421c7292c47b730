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

#include "daedalus/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "daedalus/error.hpp"

namespace daedalus::sim {
namespace {

std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void ClusterSpec::validate() const {
  if (max_workers < 1) throw Error(ErrorCode::invalid_argument, "max_workers must be >= 1");
  if (!(unit_capacity > 0.0)) throw Error(ErrorCode::invalid_argument, "unit_capacity must be positive");
  if (capacity_jitter < 0.0 || capacity_jitter >= 1.0) {
    throw Error(ErrorCode::invalid_argument, "capacity_jitter must be in [0, 1)");
  }
  if (cpu_noise < 0.0 || cpu_noise >= 1.0) throw Error(ErrorCode::invalid_argument, "cpu_noise must be in [0, 1)");
  if (key_groups < 1) throw Error(ErrorCode::invalid_argument, "key_groups must be >= 1");
  if (!(checkpoint_interval > 0.0) || downtime_out < 0.0 || downtime_in < 0.0 || base_latency < 0.0) {
    throw Error(ErrorCode::invalid_argument, "checkpoint interval must be positive and downtimes non-negative");
  }
  if (distribution == KeyDistribution::explicit_weights) {
    if (explicit_weights.empty()) throw Error(ErrorCode::invalid_argument, "explicit key weights are empty");
    double total = 0.0;
    for (double w : explicit_weights) {
      if (w < 0.0) throw Error(ErrorCode::invalid_argument, "key weights must be non-negative");
      total += w;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::invalid_argument, "key weights sum to zero");
  } else if (key_count < 1) {
    throw Error(ErrorCode::invalid_argument, "key_count must be >= 1");
  }
  if (distribution == KeyDistribution::zipf && zipf_exponent < 0.0) {
    throw Error(ErrorCode::invalid_argument, "zipf exponent must be non-negative");
  }
}

std::vector<double> ClusterSpec::key_weights() const {
  std::vector<double> w;
  switch (distribution) {
    case KeyDistribution::uniform:
      w.assign(static_cast<std::size_t>(key_count), 1.0);
      break;
    case KeyDistribution::zipf:
      w.resize(static_cast<std::size_t>(key_count));
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = 1.0 / std::pow(static_cast<double>(k + 1), zipf_exponent);
      break;
    case KeyDistribution::explicit_weights:
      w = explicit_weights;
      break;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return w;
}

std::vector<double> worker_shares(const ClusterSpec& spec, int workers) {
  if (workers < 1) throw Error(ErrorCode::invalid_target, "scale-out must be >= 1");
  const std::vector<double> weights = spec.key_weights();
  std::vector<double> shares(static_cast<std::size_t>(workers), 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    std::size_t worker = 0;
    if (spec.assignment == Assignment::round_robin) {
      worker = k % static_cast<std::size_t>(workers);
    } else {
      const auto groups = static_cast<std::uint64_t>(spec.key_groups);
      const std::uint64_t group = mix(k) % groups;
      worker = static_cast<std::size_t>(group * static_cast<std::uint64_t>(workers) / groups);
    }
    shares[worker] += weights[k];
  }
  return shares;
}

double bottleneck_capacity(const std::vector<double>& shares, const std::vector<double>& capacities) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < shares.size(); ++w) {
    if (shares[w] > 0.0) best = std::min(best, capacities[w] / shares[w]);
  }
  return std::isfinite(best) ? best : 0.0;
}

Simulator::Simulator(ClusterSpec spec, int initial_workers, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {
  spec_.validate();
  if (initial_workers < 1 || initial_workers > spec_.max_workers) {
    throw Error(ErrorCode::invalid_target, "initial workers outside [1, max_workers]");
  }
  assign(initial_workers);
}

void Simulator::assign(int workers) {
  active_ = workers;
  shares_ = worker_shares(spec_, workers);
  capacities_.assign(static_cast<std::size_t>(workers), spec_.unit_capacity);
  if (spec_.capacity_jitter > 0.0) {
    std::uniform_real_distribution<double> jitter(-spec_.capacity_jitter, spec_.capacity_jitter);
    for (auto& c : capacities_) c = spec_.unit_capacity * (1.0 + jitter(rng_));
  }
}

double Simulator::ground_truth_capacity() const { return bottleneck_capacity(shares_, capacities_); }

double Simulator::ground_truth_capacity(int scaleout) const {
  if (scaleout < 1 || scaleout > spec_.max_workers) {
    throw Error(ErrorCode::invalid_target, "scale-out " + std::to_string(scaleout) + " outside [1, max_workers]");
  }
  if (scaleout == active_) return ground_truth_capacity();
  const std::vector<double> unit(static_cast<std::size_t>(scaleout), spec_.unit_capacity);
  return bottleneck_capacity(worker_shares(spec_, scaleout), unit);
}

const SecondRecord& Simulator::step(double workload_rate) {
  SecondRecord rec;
  rec.time = now_;
  rec.workers = active_;
  rec.arrivals = std::llround(std::max(workload_rate, 0.0));
  rec.worker_cpu.assign(static_cast<std::size_t>(active_), 0.0);
  rec.worker_throughput.assign(static_cast<std::size_t>(active_), 0.0);

  const double capacity = ground_truth_capacity();
  if (down()) {
    rec.down = true;
    backlog_ += rec.arrivals;
  } else {
    const std::int64_t available = backlog_ + rec.arrivals;
    const auto limit = static_cast<std::int64_t>(std::floor(capacity));
    rec.processed = std::min(available, limit);
    backlog_ = available - rec.processed;

    std::uniform_real_distribution<double> noise(-spec_.cpu_noise, spec_.cpu_noise);
    double cpu_sum = 0.0;
    for (std::size_t w = 0; w < shares_.size(); ++w) {
      const double tput = shares_[w] * static_cast<double>(rec.processed);
      double cpu = tput / capacities_[w];
      if (spec_.cpu_noise > 0.0) cpu *= 1.0 + noise(rng_);
      cpu = std::clamp(cpu, 0.0, 1.0);
      rec.worker_throughput[w] = tput;
      rec.worker_cpu[w] = cpu;
      cpu_sum += cpu;
    }
    rec.cpu_avg = cpu_sum / static_cast<double>(shares_.size());

    processed_since_checkpoint_ += rec.processed;
    checkpoint_clock_ += 1.0;
    if (checkpoint_clock_ >= spec_.checkpoint_interval - 1e-9) {
      checkpoint_clock_ = 0.0;
      processed_since_checkpoint_ = 0;
    }
  }
  rec.backlog = backlog_;
  rec.latency = (capacity > 0.0 ? static_cast<double>(backlog_) / capacity : 0.0) + spec_.base_latency;

  arrivals_total_ += rec.arrivals;
  processed_total_ += rec.processed;
  ++now_;
  records_.push_back(std::move(rec));
  return records_.back();
}

void Simulator::rescale(int target) {
  if (target < 1 || target > spec_.max_workers) {
    throw Error(ErrorCode::invalid_target, "rescale target " + std::to_string(target) + " outside [1, max_workers]");
  }
  // Everything processed since the last completed checkpoint is replayed.
  backlog_ += processed_since_checkpoint_;
  processed_total_ -= processed_since_checkpoint_;
  processed_since_checkpoint_ = 0;
  checkpoint_clock_ = 0.0;

  const double downtime = target < active_ ? spec_.downtime_in : spec_.downtime_out;
  down_until_ = now_ + static_cast<std::int64_t>(std::llround(downtime));
  last_restart_ = now_;
  assign(target);
}

void Simulator::set_checkpoint_phase(double clock, std::int64_t processed_since) {
  if (clock < 0.0 || clock >= spec_.checkpoint_interval || processed_since < 0 ||
      processed_since > processed_total_) {
    throw Error(ErrorCode::invalid_argument, "checkpoint phase outside the current interval");
  }
  checkpoint_clock_ = clock;
  processed_since_checkpoint_ = processed_since;
}

control::MetricsSnapshot SimulatorMetricsProvider::poll(double window) {
  control::MetricsSnapshot snap;
  const auto& records = sim_.records();
  snap.now = static_cast<double>(sim_.now());
  snap.parallelism = sim_.active_workers();
  snap.consumer_lag = static_cast<double>(sim_.backlog());
  snap.uptime = static_cast<double>(sim_.now() - sim_.last_restart());

  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(window, 0.0)), records.size());
  snap.workload.start = snap.now - static_cast<double>(n);
  snap.workload.rates.reserve(n);
  snap.throughput.reserve(n);
  for (std::size_t i = records.size() - n; i < records.size(); ++i) {
    snap.workload.rates.push_back(static_cast<double>(records[i].arrivals));
    snap.throughput.push_back(static_cast<double>(records[i].processed));
  }

  // Per-worker averages over the CPU window, restricted to the current run.
  const std::int64_t from = std::max<std::int64_t>(sim_.now() - std::llround(cpu_window_), sim_.last_restart());
  const auto workers = static_cast<std::size_t>(sim_.active_workers());
  std::vector<double> cpu(workers, 0.0);
  std::vector<double> tput(workers, 0.0);
  std::size_t seconds = 0;
  for (auto it = records.rbegin(); it != records.rend() && it->time >= from; ++it) {
    for (std::size_t w = 0; w < workers; ++w) {
      cpu[w] += it->worker_cpu[w];
      tput[w] += it->worker_throughput[w];
    }
    ++seconds;
  }
  if (seconds > 0) {
    for (std::size_t w = 0; w < workers; ++w) {
      snap.workers.push_back({static_cast<model::WorkerId>(w), snap.now, cpu[w] / static_cast<double>(seconds),
                              tput[w] / static_cast<double>(seconds)});
    }
  }
  return snap;
}

void SimulatorExecutor::rescale(int target) {
  try {
    sim_.rescale(target);
  } catch (const Error& e) {
    throw Error(ErrorCode::executor_failed, e.what());
  }
  ++actions_;
}

}  // namespace daedalus::sim
