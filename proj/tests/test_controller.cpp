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

#include <cmath>
#include <memory>

#include "daedalus/controller.hpp"
#include "daedalus/error.hpp"
#include "daedalus/simulator.hpp"

using namespace daedalus;
using namespace daedalus::control;

namespace {

// Hand-built snapshots: n workers at a fixed CPU and a constant workload.
class ScriptedProvider final : public MetricsProvider {
 public:
  int workers = 12;
  double cpu = 0.5;
  double rate = 1000.0;
  double now = 60.0;
  bool unavailable = false;
  double last_window = 0.0;

  MetricsSnapshot poll(double window) override {
    last_window = window;
    if (unavailable) throw Error(ErrorCode::provider_unavailable, "metrics backend down");
    MetricsSnapshot s;
    s.now = now;
    s.parallelism = workers;
    s.uptime = now;
    for (int w = 0; w < workers; ++w) {
      s.workers.push_back({static_cast<model::WorkerId>(w), now, cpu, rate / workers});
    }
    const auto n = static_cast<std::size_t>(window);
    s.workload.start = now - window;
    s.workload.rates.assign(n, rate);
    s.throughput.assign(n, rate);
    return s;
  }
};

class RecordingExecutor final : public ScalingExecutor {
 public:
  explicit RecordingExecutor(ScalingExecutor* inner = nullptr) : inner_(inner) {}
  std::vector<int> calls;
  int failures_left = 0;

  void rescale(int target) override {
    calls.push_back(target);
    if (failures_left > 0) {
      --failures_left;
      throw Error(ErrorCode::executor_failed, "rescale not acknowledged");
    }
    if (inner_) inner_->rescale(target);
  }

 private:
  ScalingExecutor* inner_;
};

// Always forecasts a flat rate far from anything observed.
class WrongForecaster final : public forecast::Forecaster {
 public:
  void fit(const forecast::WorkloadSeries& h) override {
    fitted_ = true;
    until_ = h.end();
  }
  void update(const forecast::WorkloadSeries& l) override { until_ = l.end(); }
  forecast::Forecast forecast() const override {
    forecast::Forecast f;
    f.start = until_;
    f.values.assign(forecast::kForecastHorizon, 1e6);
    return f;
  }
  bool fitted() const noexcept override { return fitted_; }
  double known_until() const noexcept override { return until_; }

 private:
  bool fitted_ = false;
  double until_ = 0.0;
};

sim::ClusterSpec even_cluster() {
  sim::ClusterSpec c;
  c.unit_capacity = 5000;
  c.capacity_jitter = 0.0;
  c.cpu_noise = 0.0;
  c.assignment = sim::Assignment::round_robin;
  c.key_count = 60;
  return c;
}

ControllerConfig sim_config() {
  ControllerConfig c;
  c.synchronous_handoff = true;
  return c;
}

struct SimRun {
  std::vector<TickReport> ticks;
  std::vector<std::pair<std::int64_t, int>> actions;
};

// Ticks before each loop boundary, the way the harness drives the loop.
SimRun drive(sim::Simulator& s, Controller& c, ScalingExecutor& exec, double rate, int seconds) {
  sim::SimulatorMetricsProvider provider(s);
  SimRun out;
  for (int t = 0; t < seconds; ++t) {
    if (t > 0 && t % 60 == 0) {
      out.ticks.push_back(c.tick(provider, exec));
      if (out.ticks.back().executed) out.actions.emplace_back(t, out.ticks.back().to);
    }
    s.step(rate);
  }
  return out;
}

}  // namespace

TEST_CASE("one regression update per worker per tick") {
  Controller c(sim_config());
  ScriptedProvider p;
  RecordingExecutor e;
  // Refuse every rescale so the per-worker state is kept.
  e.failures_left = 1000;
  c.tick(p, e);
  REQUIRE(c.knowledge().workers.size() == 12);
  for (const auto& [id, w] : c.knowledge().workers) CHECK(w.regression.count == 1);
  CHECK(c.knowledge().history.size() == 60);
  p.now = 120;
  c.tick(p, e);
  for (const auto& [id, w] : c.knowledge().workers) CHECK(w.regression.count == 2);
  CHECK(c.knowledge().history.size() == 120);
  CHECK(c.knowledge().loop_count == 2);
}

TEST_CASE("worker samples carry the one-minute CPU average") {
  sim::ClusterSpec spec = even_cluster();
  spec.key_count = 1;
  sim::Simulator s(spec, 1, 1);
  for (int t = 0; t < 30; ++t) s.step(0);
  for (int t = 0; t < 30; ++t) s.step(5000);
  sim::SimulatorMetricsProvider p(s);
  RecordingExecutor e;
  e.failures_left = 1000;
  Controller c(sim_config());
  c.tick(p, e);
  REQUIRE(c.knowledge().workers.size() == 1);
  CHECK(c.knowledge().workers.begin()->second.latest->cpu == doctest::Approx(0.5));
}

TEST_CASE("a provider outage only advances the loop counter") {
  Controller c(sim_config());
  ScriptedProvider p;
  RecordingExecutor e;
  e.failures_left = 1000;
  c.tick(p, e);
  const Knowledge before = c.knowledge();
  const auto calls = e.calls.size();
  p.unavailable = true;
  p.now = 120;
  const auto r = c.tick(p, e);
  CHECK(r.skipped);
  CHECK_FALSE(r.error.empty());
  const Knowledge& after = c.knowledge();
  CHECK(after.loop_count == before.loop_count + 1);
  CHECK(after.history.rates == before.history.rates);
  CHECK(after.history.start == before.history.start);
  CHECK(after.workers.size() == before.workers.size());
  CHECK(after.now == before.now);
  CHECK(after.current_parallelism == before.current_parallelism);
  CHECK(e.calls.size() == calls);
  // The next poll covers the missed window as well.
  p.unavailable = false;
  p.now = 180;
  c.tick(p, e);
  CHECK(p.last_window == doctest::Approx(120));
  CHECK(c.knowledge().history.size() == 180);
}

TEST_CASE("an under-provisioned job is scaled to the smallest sufficient size") {
  sim::Simulator s(even_cluster(), 4, 1);
  sim::SimulatorExecutor inner(s);
  RecordingExecutor e(&inner);
  Controller c(sim_config());
  const auto run = drive(s, c, e, 27000, 3600);
  REQUIRE(run.actions.size() == 1);
  CHECK(run.actions[0] == std::pair<std::int64_t, int>{60, 6});
  CHECK(s.active_workers() == 6);
  CHECK(e.calls == std::vector<int>{6});
  // Afterwards every decision is to stay put and the executor is left alone.
  for (std::size_t i = 1; i < run.ticks.size(); ++i) {
    REQUIRE(run.ticks[i].decision);
    CHECK(run.ticks[i].decision->target == 6);
    CHECK_FALSE(run.ticks[i].executed);
  }
  CHECK(s.backlog() == 0);
}

TEST_CASE("grace period follows every action") {
  sim::Simulator s(even_cluster(), 4, 1);
  sim::SimulatorExecutor inner(s);
  RecordingExecutor e(&inner);
  Controller c(sim_config());
  const auto run = drive(s, c, e, 27000, 600);
  REQUIRE(run.ticks.size() >= 4);
  CHECK(run.ticks[0].executed);
  for (int i = 1; i <= 2; ++i) {
    REQUIRE(run.ticks[i].decision);
    CHECK(run.ticks[i].decision->reason == DecisionReason::grace_period);
  }
  CHECK(run.ticks[3].decision->reason != DecisionReason::grace_period);
}

TEST_CASE("a failed rescale is decided again on the next tick") {
  sim::Simulator s(even_cluster(), 4, 1);
  sim::SimulatorExecutor inner(s);
  RecordingExecutor e(&inner);
  e.failures_left = 1;
  Controller c(sim_config());
  const auto run = drive(s, c, e, 27000, 200);
  REQUIRE(run.ticks.size() == 3);
  CHECK_FALSE(run.ticks[0].executed);
  CHECK_FALSE(run.ticks[0].error.empty());
  CHECK(run.ticks[1].executed);
  CHECK(run.ticks[1].to == 6);
  CHECK(e.calls == std::vector<int>{6, 6});
  CHECK(inner.actions() == 1);
}

TEST_CASE("an externally changed parallelism counts as a rescale") {
  Controller c(sim_config());
  ScriptedProvider p;
  RecordingExecutor e;
  c.tick(p, e);
  p.workers = 8;
  p.now = 120;
  c.tick(p, e);
  CHECK(c.knowledge().current_parallelism == 8);
  CHECK(c.knowledge().last_rescale_time == 120);
  CHECK(c.knowledge().workers.size() == 8);
}

TEST_CASE("retraining is requested once, at the fifteenth poor score in a row") {
  int models = 0;
  Controller c(sim_config(), [&models] {
    ++models;
    return std::make_unique<WrongForecaster>();
  });
  ScriptedProvider p;
  p.workers = 4;
  RecordingExecutor e;
  int poor = 0;
  std::vector<int> signals;
  int installs = 0;
  for (int k = 1; k <= 25; ++k) {
    p.now = 60.0 * k;
    const auto r = c.tick(p, e);
    if (r.wape) {
      CHECK(*r.wape > 0.25);
      ++poor;
    }
    if (r.retrain_signal) signals.push_back(poor);
    if (r.retrain_installed) ++installs;
  }
  CHECK(signals == std::vector<int>{15});
  CHECK(installs == 1);
  CHECK(models == 2);
  CHECK(c.knowledge().health.consecutive_poor < 15);
}

TEST_CASE("configuration validation") {
  ControllerConfig c;
  c.max_scaleout = 0;
  CHECK_THROWS_AS(Controller{c}, Error);
  c = {};
  c.fallback_window = 10;
  CHECK_THROWS_AS(Controller{c}, Error);
}
