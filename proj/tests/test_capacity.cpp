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

#include <doctest.h>

#include <random>
#include <vector>

#include "daedalus/capacity.hpp"
#include "daedalus/error.hpp"
#include "daedalus/simulator.hpp"

using namespace daedalus;
using namespace daedalus::model;

namespace {

// A worker whose regression was fit on tput = per_unit * cpu.
WorkerModel line_worker(WorkerId id, double per_unit, double latest_cpu) {
  WorkerModel w;
  for (double c : {0.3, 0.45, 0.6, 0.75}) w.observe({id, 0.0, c, per_unit * c});
  w.observe({id, 1.0, latest_cpu, per_unit * latest_cpu});
  return w;
}

}  // namespace

TEST_CASE("skew ratio against the busiest worker") {
  CHECK(worker_max_cpu(0.75, 1.0) == doctest::Approx(0.75));
  CHECK(worker_max_cpu(0.8, 0.8) == doctest::Approx(1.0));
  try {
    worker_max_cpu(0.0, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undefined_skew);
  }
}

TEST_CASE("twelve workers around 0.8 mean cpu keep their ordering") {
  const std::vector<double> cpus{1.0, 0.95, 0.9, 0.86, 0.83, 0.8, 0.78, 0.76, 0.74, 0.72, 0.7, 0.56};
  double mean = 0.0;
  for (double c : cpus) mean += c;
  CHECK(mean / 12 == doctest::Approx(0.8).epsilon(0.01));
  for (std::size_t i = 0; i < cpus.size(); ++i) {
    CHECK(worker_max_cpu(cpus[i], 1.0) == doctest::Approx(cpus[i]));
    if (i > 0) CHECK(worker_max_cpu(cpus[i], 1.0) <= worker_max_cpu(cpus[i - 1], 1.0));
  }
}

TEST_CASE("property: skew ratios are scale invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> cpus(8);
    for (double& c : cpus) c = u(rng);
    const double max = *std::max_element(cpus.begin(), cpus.end());
    const double k = 0.1 + 0.9 * u(rng);
    for (double c : cpus) CHECK(worker_max_cpu(c * k, max * k) == doctest::Approx(worker_max_cpu(c, max)));
  }
}

TEST_CASE("single worker on a line") {
  const std::vector<WorkerModel> ws{line_worker(0, 60000, 1.0)};
  CHECK(current_scaleout_capacity(ws) == doctest::Approx(60000));
}

TEST_CASE("two identical workers capped at 30000 each") {
  const std::vector<WorkerModel> ws{line_worker(0, 30000, 0.9), line_worker(1, 30000, 0.9)};
  CHECK(current_scaleout_capacity(ws) == doctest::Approx(60000));
}

TEST_CASE("four skewed workers match the hand sum") {
  const double unit = 10000;
  const std::vector<double> ratios{1.0, 0.9, 0.8, 0.7};
  std::vector<WorkerModel> ws;
  for (std::size_t i = 0; i < ratios.size(); ++i) ws.push_back(line_worker(static_cast<WorkerId>(i), unit, ratios[i]));
  // Each worker is capped at its throughput when the hottest one saturates.
  const double expected = unit * (1.0 + 0.9 + 0.8 + 0.7);
  CHECK(current_scaleout_capacity(ws) == doctest::Approx(expected));
}

TEST_CASE("fallback to throughput over cpu without a usable line") {
  WorkerModel w;
  w.observe({0, 0.0, 0.8, 40000});
  const std::vector<WorkerModel> ws{w};
  CHECK(current_scaleout_capacity(ws) == doctest::Approx(50000));
}

TEST_CASE("idle workers are skipped, all idle is an error") {
  WorkerModel idle;
  idle.observe({1, 0.0, 0.0, 0.0});
  CHECK(idle.regression.count == 0);
  const std::vector<WorkerModel> ws{line_worker(0, 20000, 1.0), idle};
  CHECK(current_scaleout_capacity(ws) == doctest::Approx(20000));
  const std::vector<WorkerModel> all_idle{idle, idle};
  CHECK_THROWS_AS(current_scaleout_capacity(all_idle), Error);
  CHECK_THROWS_AS(current_scaleout_capacity(std::vector<WorkerModel>{}), Error);
}

TEST_CASE("capacity table extrapolates from the current scale-out") {
  const auto t = estimate_capacity_table(40000, 2, 4, CapacityTable(4), 100.0);
  CHECK(t.capacity(1) == doctest::Approx(20000));
  CHECK(t.capacity(2) == doctest::Approx(40000));
  CHECK(t.capacity(3) == doctest::Approx(60000));
  CHECK(t.capacity(4) == doctest::Approx(80000));
  CHECK(t.at(2).source == CapacitySource::observed);
  CHECK(t.at(1).source == CapacitySource::predicted);
  CHECK(t.at(3).source == CapacitySource::predicted);
}

TEST_CASE("observed entries win over predictions until they expire") {
  CapacityTable history(4);
  history.set(3, {55000, CapacitySource::observed, 0.0});
  const auto t = estimate_capacity_table(40000, 2, 4, history, 100.0);
  CHECK(t.capacity(3) == doctest::Approx(55000));
  CHECK(t.at(3).source == CapacitySource::observed);
  const auto later = estimate_capacity_table(40000, 2, 4, history, 4000.0, 3600.0);
  CHECK(later.capacity(3) == doctest::Approx(60000));
  CHECK(later.at(3).source == CapacitySource::predicted);
}

TEST_CASE("property: all-predicted tables increase strictly") {
  for (int cur = 1; cur <= 12; ++cur) {
    const auto t = estimate_capacity_table(1000.0 * cur + 37.0, cur, 12, CapacityTable(12), 0.0);
    for (int i = 2; i <= 12; ++i) {
      if (t.at(i).source == CapacitySource::predicted && t.at(i - 1).source == CapacitySource::predicted) {
        CHECK(t.capacity(i) > t.capacity(i - 1));
      }
    }
  }
}

TEST_CASE("table out of range") {
  CapacityTable t(3);
  CHECK_THROWS_AS(t.set(4, {}), Error);
  CHECK_THROWS_AS(t.at(2), Error);
  CHECK_THROWS_AS(estimate_capacity_table(1.0, 5, 3, t, 0.0), Error);
}

TEST_CASE("table learns sublinear skew from visited scale-outs") {
  sim::ClusterSpec spec;
  spec.distribution = sim::KeyDistribution::zipf;
  spec.zipf_exponent = 0.5;
  spec.capacity_jitter = 0.0;
  spec.cpu_noise = 0.0;
  sim::Simulator s(spec, 2, 9);

  // Visit 4 then 2, measuring each under saturation.
  auto measure = [&](int n) {
    s.rescale(n);
    for (int t = 0; t < 200; ++t) s.step(100000);
    std::vector<WorkerModel> ws(static_cast<std::size_t>(n));
    const auto& rec = s.records().back();
    for (int w = 0; w < n; ++w) {
      const auto k = static_cast<std::size_t>(w);
      ws[k].observe({static_cast<WorkerId>(w), 0.0, rec.worker_cpu[k], rec.worker_throughput[k]});
    }
    return current_scaleout_capacity(ws);
  };
  CapacityTable table(12);
  table = estimate_capacity_table(measure(4), 4, 12, table, 0.0);
  const double truth4 = s.ground_truth_capacity();
  table = estimate_capacity_table(measure(2), 2, 12, table, 300.0);
  CHECK(table.at(4).source == CapacitySource::observed);
  CHECK(std::abs(table.capacity(4) - truth4) / truth4 < 0.05);
}
