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

#ifndef DAEDALUS_CAPACITY_HPP
#define DAEDALUS_CAPACITY_HPP

#include <optional>
#include <span>
#include <vector>

#include "daedalus/regression.hpp"

namespace daedalus::model {

// Per-worker knowledge: the running regression plus the most recent sample
// (used for the skew ratio and as the fallback estimate).
struct WorkerModel {
  RegressionState regression;
  std::optional<MetricSample> latest;

  void observe(const MetricSample& sample);
};

// Expected CPU of a worker at the moment the hottest worker saturates.
// Throws Error(undefined_skew) when every worker is idle.
double worker_max_cpu(double worker_cpu, double max_cpu_among_workers);

// Capacity of one worker at the given CPU, from the regression line when it is
// usable and from throughput/CPU of the latest sample otherwise.
double worker_capacity(const WorkerModel& worker, double cpu_target);

// Skew-aware sum of worker capacities at the current scale-out.
double current_scaleout_capacity(std::span<const WorkerModel> workers);

enum class CapacitySource { observed, predicted };

struct CapacityEntry {
  double capacity = 0.0;
  CapacitySource source = CapacitySource::predicted;
  double observed_at = 0.0;

  double age(double now) const noexcept { return now - observed_at; }
};

// Capacity estimate per scale-out 1..max_scaleout.
class CapacityTable {
 public:
  CapacityTable() = default;
  explicit CapacityTable(int max_scaleout);

  int max_scaleout() const noexcept { return static_cast<int>(entries_.size()); }
  bool contains(int scaleout) const noexcept;
  const CapacityEntry& at(int scaleout) const;
  double capacity(int scaleout) const { return at(scaleout).capacity; }
  void set(int scaleout, const CapacityEntry& entry);

 private:
  std::vector<std::optional<CapacityEntry>> entries_;
};

inline constexpr double kDefaultObservedMaxAge = 3600.0;

// Observed entry for the current scale-out, retained observations for the
// scale-outs seen before (until they age out), and average-capacity
// extrapolation for everything else.
CapacityTable estimate_capacity_table(double current_capacity, int current_scaleout, int max_scaleout,
                                      const CapacityTable& history, double now,
                                      double max_observed_age = kDefaultObservedMaxAge);

CapacityTable estimate_capacity_table(std::span<const WorkerModel> workers, int current_scaleout,
                                      int max_scaleout, const CapacityTable& history, double now,
                                      double max_observed_age = kDefaultObservedMaxAge);

}  // namespace daedalus::model

#endif  // DAEDALUS_CAPACITY_HPP
