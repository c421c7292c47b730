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

#include <algorithm>
#include <cmath>
#include <random>

#include "daedalus/error.hpp"
#include "daedalus/simulator.hpp"

using namespace daedalus;
using namespace daedalus::sim;

namespace {

ClusterSpec even(int keys, double unit) {
  ClusterSpec s;
  s.unit_capacity = unit;
  s.capacity_jitter = 0.0;
  s.cpu_noise = 0.0;
  s.assignment = Assignment::round_robin;
  s.key_count = keys;
  return s;
}

ClusterSpec weighted(std::vector<double> w, double unit) {
  ClusterSpec s = even(1, unit);
  s.distribution = KeyDistribution::explicit_weights;
  s.explicit_weights = std::move(w);
  return s;
}

}  // namespace

TEST_CASE("below capacity everything is processed") {
  Simulator s(even(4, 15000), 4, 1);
  const auto& r = s.step(40000);
  CHECK(r.processed == 40000);
  CHECK(r.backlog == 0);
  CHECK(r.cpu_avg == doctest::Approx(40000.0 / 60000.0));
  for (double c : r.worker_cpu) CHECK(c == doctest::Approx(0.6667).epsilon(1e-3));
}

TEST_CASE("above capacity the backlog grows by the excess") {
  Simulator s(even(4, 15000), 4, 1);
  std::int64_t prev = 0;
  for (int t = 0; t < 5; ++t) {
    const auto& r = s.step(70000);
    CHECK(r.processed == 60000);
    CHECK(r.cpu_avg == doctest::Approx(1.0));
    CHECK(r.backlog - prev == 10000);
    prev = r.backlog;
  }
}

TEST_CASE("idle cluster") {
  Simulator s(even(4, 15000), 4, 1);
  const auto& r = s.step(0);
  CHECK(r.processed == 0);
  CHECK(r.cpu_avg == 0.0);
  CHECK(r.latency == doctest::Approx(0.2));
}

TEST_CASE("restart replays the tuples since the last checkpoint") {
  Simulator s(even(2, 5000), 2, 1);
  for (int t = 0; t < 17; ++t) s.step(1000);
  CHECK(s.time_since_checkpoint() == doctest::Approx(7));
  const auto before = s.backlog();
  const auto processed = s.cumulative_processed();
  s.rescale(2);
  CHECK(s.backlog() - before == 7000);
  CHECK(processed - s.cumulative_processed() == 7000);
  CHECK(s.cumulative_arrivals() == s.cumulative_processed() + s.backlog());
}

TEST_CASE("same-count rescale still restarts") {
  Simulator s(even(2, 5000), 2, 1);
  for (int t = 0; t < 13; ++t) s.step(1000);
  s.rescale(2);
  CHECK(s.down());
  CHECK(s.backlog() == 3000);
  int down = 0;
  while (s.step(1000).down) ++down;
  CHECK(down == 30);
}

TEST_CASE("scale-in downtime is shorter") {
  Simulator s(even(4, 5000), 4, 1);
  s.step(100);
  s.rescale(2);
  int down = 0;
  while (s.step(100).down) ++down;
  CHECK(down == 15);
  CHECK(s.active_workers() == 2);
  CHECK_THROWS_AS(s.rescale(0), Error);
  CHECK_THROWS_AS(s.rescale(13), Error);
}

TEST_CASE("zipf keys spread unevenly across twelve workers") {
  ClusterSpec spec;
  spec.distribution = KeyDistribution::zipf;
  spec.zipf_exponent = 1.0;
  spec.capacity_jitter = 0.0;
  const auto shares = worker_shares(spec, 12);
  double total = 0.0;
  for (double v : shares) total += v;
  CHECK(total == doctest::Approx(1.0));
  const double max = *std::max_element(shares.begin(), shares.end());
  const double min = *std::min_element(shares.begin(), shares.end());
  // The hottest key alone carries 1/H(1000) of the load.
  CHECK(max >= 1.0 / 7.49);
  CHECK(max / min > 2.0);
  // With every worker at the same speed the bottleneck is the largest share.
  Simulator s(spec, 12, 1);
  CHECK(s.ground_truth_capacity(12) == doctest::Approx(spec.unit_capacity / max));
}

TEST_CASE("ground truth capacity") {
  CHECK(Simulator(even(4, 15000), 4, 1).ground_truth_capacity() == doctest::Approx(60000));
  CHECK(Simulator(weighted({0.5, 0.25, 0.25}, 15000), 3, 1).ground_truth_capacity() == doctest::Approx(30000));
  CHECK(Simulator(weighted({0.4, 0.3, 0.2, 0.1}, 15000), 4, 1).ground_truth_capacity() ==
        doctest::Approx(37500));
  CHECK(bottleneck_capacity({0.5, 0.5}, {100, 300}) == doctest::Approx(200));
}

TEST_CASE("metrics provider averages the recent window") {
  ClusterSpec spec = even(1, 10000);
  spec.max_workers = 2;
  Simulator s(spec, 1, 1);
  // CPU steps from 0 to 1 halfway through a 60 s window.
  for (int t = 0; t < 30; ++t) s.step(0);
  for (int t = 0; t < 30; ++t) s.step(10000);
  SimulatorMetricsProvider p(s);
  const auto snap = p.poll(60);
  REQUIRE(snap.workers.size() == 1);
  CHECK(snap.workers[0].cpu == doctest::Approx(0.5));
  CHECK(snap.workload.size() == 60);
  CHECK(snap.throughput.size() == 60);
  CHECK(snap.parallelism == 1);
  CHECK(snap.now == 60);
}

TEST_CASE("executor counts actions and reports bad targets") {
  Simulator s(even(2, 1000), 1, 1);
  SimulatorExecutor e(s);
  e.rescale(2);
  CHECK(e.actions() == 1);
  try {
    e.rescale(99);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::executor_failed);
  }
}

TEST_CASE("property: conservation, saturation, linearity and proportional skew") {
  std::mt19937_64 rng(77);
  for (int run = 0; run < 10; ++run) {
    ClusterSpec spec;
    spec.distribution = run % 2 ? KeyDistribution::zipf : KeyDistribution::uniform;
    spec.zipf_exponent = 0.7;
    spec.cpu_noise = 0.0;
    Simulator s(spec, 1 + run, static_cast<std::uint64_t>(run));
    std::uniform_real_distribution<double> rate(0, 70000);
    std::uniform_int_distribution<int> target(1, 12);
    std::vector<double> ratio;
    for (int t = 0; t < 2000; ++t) {
      if (t % 300 == 299) s.rescale(target(rng));
      const auto& r = s.step(rate(rng));
      CHECK(s.cumulative_arrivals() == s.cumulative_processed() + s.backlog());
      CHECK(static_cast<double>(r.processed) <= s.ground_truth_capacity() + 1e-9);
      if (r.down || r.processed == 0) continue;
      for (std::size_t w = 0; w < r.worker_cpu.size(); ++w) {
        if (r.worker_cpu[w] > 0.0 && r.worker_cpu[w] < 1.0) {
          // Throughput per unit of CPU is the worker's speed.
          CHECK(r.worker_throughput[w] / r.worker_cpu[w] == doctest::Approx(s.capacities()[w]));
        }
      }
      // Throughput shares follow the key shares at every load.
      const double total = static_cast<double>(r.processed);
      for (std::size_t w = 0; w < r.worker_throughput.size(); ++w) {
        CHECK(r.worker_throughput[w] / total == doctest::Approx(s.shares()[w]));
      }
    }
  }
}

TEST_CASE("property: a seed reproduces the run") {
  ClusterSpec spec;
  auto run = [&](std::uint64_t seed) {
    Simulator s(spec, 3, seed);
    std::vector<double> out;
    for (int t = 0; t < 500; ++t) {
      if (t == 200) s.rescale(7);
      const auto& r = s.step(20000 + 10000 * std::sin(t / 50.0));
      out.push_back(r.cpu_avg);
      out.push_back(static_cast<double>(r.backlog));
    }
    return out;
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
}

TEST_CASE("cluster validation") {
  ClusterSpec s;
  s.unit_capacity = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = {};
  s.distribution = KeyDistribution::explicit_weights;
  CHECK_THROWS_AS(s.validate(), Error);
  CHECK_THROWS_AS(Simulator(ClusterSpec{}, 0, 1), Error);
}
