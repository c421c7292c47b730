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

#include "daedalus/capacity.hpp"

#include <algorithm>
#include <string>

#include "daedalus/error.hpp"

namespace daedalus::model {

void WorkerModel::observe(const MetricSample& sample) {
  latest = sample;
  if (sample.cpu >= kIdleCpu) regression = update_regression(regression, sample);
}

double worker_max_cpu(double worker_cpu, double max_cpu_among_workers) {
  if (!(max_cpu_among_workers >= kIdleCpu)) {
    throw Error(ErrorCode::undefined_skew, "skew ratio undefined: every worker is idle");
  }
  return std::clamp(worker_cpu / max_cpu_among_workers, 0.0, 1.0);
}

double worker_capacity(const WorkerModel& worker, double cpu_target) {
  if (regression_usable(worker.regression)) return predict_capacity(worker.regression, cpu_target);
  if (!worker.latest) throw Error(ErrorCode::insufficient_data, "worker has no observations");
  return simple_capacity(worker.latest->throughput, worker.latest->cpu) * cpu_target;
}

double current_scaleout_capacity(std::span<const WorkerModel> workers) {
  double max_cpu = 0.0;
  bool observed = false;
  for (const auto& w : workers) {
    if (!w.latest) continue;
    observed = true;
    max_cpu = std::max(max_cpu, w.latest->cpu);
  }
  if (!observed) throw Error(ErrorCode::insufficient_data, "no worker with an observation");
  double total = 0.0;
  for (const auto& w : workers) {
    if (!w.latest) continue;
    const double target = worker_max_cpu(w.latest->cpu, max_cpu);
    if (w.latest->cpu < kIdleCpu) continue;
    total += worker_capacity(w, target);
  }
  return total;
}

CapacityTable::CapacityTable(int max_scaleout) {
  if (max_scaleout < 1) throw Error(ErrorCode::invalid_argument, "max scale-out must be >= 1");
  entries_.resize(static_cast<std::size_t>(max_scaleout));
}

bool CapacityTable::contains(int scaleout) const noexcept {
  return scaleout >= 1 && scaleout <= max_scaleout() && entries_[scaleout - 1].has_value();
}

const CapacityEntry& CapacityTable::at(int scaleout) const {
  if (!contains(scaleout)) {
    throw Error(ErrorCode::invalid_target, "no capacity entry for scale-out " + std::to_string(scaleout));
  }
  return *entries_[scaleout - 1];
}

void CapacityTable::set(int scaleout, const CapacityEntry& entry) {
  if (scaleout < 1 || scaleout > max_scaleout()) {
    throw Error(ErrorCode::invalid_target, "scale-out " + std::to_string(scaleout) + " out of range");
  }
  entries_[scaleout - 1] = entry;
}

CapacityTable estimate_capacity_table(double current_capacity, int current_scaleout, int max_scaleout,
                                      const CapacityTable& history, double now, double max_observed_age) {
  if (current_scaleout < 1 || current_scaleout > max_scaleout) {
    throw Error(ErrorCode::invalid_target, "current scale-out out of range");
  }
  const double current = std::max(current_capacity, 0.0);
  const double per_worker = current / current_scaleout;
  CapacityTable table(max_scaleout);
  for (int i = 1; i <= max_scaleout; ++i) {
    if (i == current_scaleout) {
      table.set(i, {current, CapacitySource::observed, now});
      continue;
    }
    if (history.contains(i)) {
      const auto& old = history.at(i);
      if (old.source == CapacitySource::observed && old.age(now) <= max_observed_age) {
        table.set(i, old);
        continue;
      }
    }
    table.set(i, {per_worker * i, CapacitySource::predicted, now});
  }
  return table;
}

CapacityTable estimate_capacity_table(std::span<const WorkerModel> workers, int current_scaleout,
                                      int max_scaleout, const CapacityTable& history, double now,
                                      double max_observed_age) {
  return estimate_capacity_table(current_scaleout_capacity(workers), current_scaleout, max_scaleout, history,
                                 now, max_observed_age);
}

}  // namespace daedalus::model
