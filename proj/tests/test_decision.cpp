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

#include "daedalus/baselines.hpp"
#include "daedalus/decision.hpp"
#include "daedalus/error.hpp"
#include "oracles.hpp"

using namespace daedalus;
using namespace daedalus::control;

namespace {

DecisionInputs base_inputs(std::vector<double> capacities, int current, double w_avg, double forecast_level) {
  DecisionInputs in;
  in.now = 5000;
  in.max_scaleout = static_cast<int>(capacities.size());
  in.current = current;
  in.capacities = model::CapacityTable(in.max_scaleout);
  for (int i = 1; i <= in.max_scaleout; ++i) {
    in.capacities.set(i, {capacities[static_cast<std::size_t>(i - 1)], model::CapacitySource::predicted, in.now});
  }
  in.average_workload = w_avg;
  in.forecast = {in.now, std::vector<double>(900, forecast_level)};
  in.recent_workload = {in.now - 11, std::vector<double>(11, w_avg)};
  return in;
}

}  // namespace

TEST_CASE("grace period blocks everything") {
  auto in = base_inputs({1000, 2000, 3000}, 1, 2500, 2500);
  in.since_last_action = 100;
  const auto d = decide(in);
  CHECK(d.reason == DecisionReason::grace_period);
  CHECK(d.target == 1);
}

TEST_CASE("recent rescale keeps a sufficient scale-out") {
  auto in = base_inputs({12500, 25000, 37500, 50000}, 4, 30000, 32000);
  in.since_last_rescale = 300;
  in.since_last_action = 300;
  const auto d = decide(in);
  CHECK(d.reason == DecisionReason::recent_rescale_ok);
  CHECK(d.target == 4);
  CHECK_FALSE(d.changes(4));
}

TEST_CASE("a candidate whose recovery exceeds the target is skipped") {
  // Capacity 2 barely exceeds the workload: the backlog takes far longer than
  // the target to drain.
  auto in = base_inputs({1000, 2010, 4000}, 1, 2000, 2000);
  const auto rt2 = candidate_recovery(in, 2);
  REQUIRE(rt2.has_value());
  CHECK(rt2->total > 600);
  const auto d = decide(in);
  CHECK(d.target == 3);
  CHECK(d.reason == DecisionReason::scale_out);
  REQUIRE(d.predicted_recovery.has_value());
  CHECK(*d.predicted_recovery <= 600);
}

TEST_CASE("recovery target of 600 s rejects a 700 s candidate") {
  // 10 000 replayed + 30 000 queued during downtime, drained at 60 t/s spare:
  // 30 + 667 = 697 s.
  auto in = base_inputs({500, 1060, 3000}, 1, 1000, 1000);
  const auto rt = candidate_recovery(in, 2);
  REQUIRE(rt.has_value());
  CHECK(rt->backlog == doctest::Approx(40000));
  CHECK(rt->total == doctest::Approx(30 + std::ceil(40000.0 / 60.0)));
  CHECK(rt->total > 600);
  const auto d = decide(in);
  CHECK(d.target == 3);
  CHECK(d.reason == DecisionReason::scale_out);
}

TEST_CASE("worked scenario agrees with the oracle") {
  auto in = base_inputs({10000, 20000, 30000, 40000}, 4, 15000, 18000);
  in.consumer_lag = 25000;
  const auto d = decide(in);
  const auto ref = oracle::brute_force_decide(in);
  CHECK(d.target == ref.target);
  CHECK(d.reason == ref.reason);
  // 2 covers workload and forecast but not the lag; 3 is the answer.
  CHECK(d.target == 3);
  CHECK(d.reason == DecisionReason::scale_in);
}

TEST_CASE("scale-in waits for the lag") {
  auto in = base_inputs({10000, 20000, 30000, 40000}, 4, 8000, 9000);
  in.consumer_lag = 35000;
  CHECK(decide(in).target == 4);
  in.consumer_lag = 0;
  CHECK(decide(in).target == 1);
}

TEST_CASE("nothing fits: forced maximum with violation flag") {
  auto in = base_inputs({1000, 2000, 3000}, 2, 5000, 5000);
  const auto d = decide(in);
  CHECK(d.reason == DecisionReason::forced_max);
  CHECK(d.target == 3);
  CHECK(d.recovery_target_violated);
}

TEST_CASE("current scale-out stops the search") {
  auto in = base_inputs({10000, 20000, 30000}, 2, 15000, 25000);
  // 2 covers the workload and the recovery window but not the full horizon
  // maximum; it is kept rather than scaling to 3.
  in.forecast.values.assign(900, 15000);
  for (std::size_t k = 800; k < 900; ++k) in.forecast.values[k] = 25000;
  const auto d = decide(in);
  CHECK(d.reason == DecisionReason::no_change);
  CHECK(d.target == 2);
}

TEST_CASE("inconsistent inputs") {
  auto in = base_inputs({1000, 2000}, 3, 100, 100);
  CHECK_THROWS_AS(decide(in), Error);
}

TEST_CASE("property: decide matches the brute-force oracle") {
  std::mt19937_64 rng(1234);
  int mismatches = 0;
  for (int t = 0; t < 5000; ++t) {
    const auto in = oracle::random_inputs(rng);
    const auto d = decide(in);
    const auto ref = oracle::brute_force_decide(in);
    if (d.target != ref.target || d.reason != ref.reason) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("property: invariants of every decision") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 3000; ++t) {
    const auto in = oracle::random_inputs(rng);
    const auto d = decide(in);
    if (d.reason == DecisionReason::scale_out || d.reason == DecisionReason::scale_in ||
        d.reason == DecisionReason::no_change) {
      CHECK(in.capacities.capacity(d.target) > in.average_workload);
      REQUIRE(d.predicted_recovery.has_value());
      CHECK(*d.predicted_recovery <= in.recovery.target_recovery_time);
    }
    if (d.reason == DecisionReason::scale_in) CHECK(in.capacities.capacity(d.target) >= in.consumer_lag);
    // Same inputs, same answer.
    const auto again = decide(in);
    CHECK(again.target == d.target);
    CHECK(again.reason == d.reason);
  }
}

TEST_CASE("static baseline") {
  CHECK(baseline::static_decide(12).target == 12);
  CHECK(baseline::static_decide(1).target == 1);
  CHECK(baseline::static_decide(7).target == baseline::static_decide(7).target);
}
