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

#ifndef DAEDALUS_EXPERIMENT_HPP
#define DAEDALUS_EXPERIMENT_HPP

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "daedalus/controller.hpp"
#include "daedalus/report.hpp"
#include "daedalus/scenario.hpp"
#include "daedalus/simulator.hpp"

namespace daedalus::harness {

// Optional observers for a single controller run.
struct RunHooks {
  // After every Daedalus tick, with the simulator as the tick left it.
  std::function<void(const control::TickReport&, const sim::Simulator&)> on_tick;
  // After every simulated second.
  std::function<void(const sim::Simulator&)> on_second;
  // Per-loop decision log lines; nothing is logged when unset.
  std::function<void(const std::string&)> log;
};

struct ControllerRun {
  std::string name;
  ControllerKind kind = ControllerKind::daedalus;
  bool failed = false;
  std::string error;
  double rt_target = 600.0;
  std::vector<SecondRow> seconds;
  std::vector<LoopRow> loops;
  std::vector<recovery::RecoveryMeasurement> measured;
  int recovery_timeouts = 0;
  int forced_violations = 0;
};

// Runs one controller against a fresh simulator seeded with the scenario
// seed. `trace` holds one rate per second.
ControllerRun run_controller(const Scenario& scenario, const ControllerSpec& spec, const std::vector<double>& trace,
                             const RunHooks& hooks = {});

struct ExperimentResult {
  RunMeta meta;
  std::vector<ControllerRun> runs;
  std::vector<RunSummary> summaries;
  std::string summary_text;

  bool any_failed() const;
};

// Runs every controller of the scenario, concurrently, each on its own
// simulator. When `out_dir` is non-empty it receives <name>.csv,
// <name>_loops.csv (Daedalus only), run.meta and summary.txt.
ExperimentResult run_experiment(Scenario scenario, const std::string& out_dir = {}, std::ostream* log = nullptr);

}  // namespace daedalus::harness

#endif  // DAEDALUS_EXPERIMENT_HPP
