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

#ifndef DAEDALUS_SCENARIO_HPP
#define DAEDALUS_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "daedalus/baselines.hpp"
#include "daedalus/controller.hpp"
#include "daedalus/simulator.hpp"
#include "daedalus/trace.hpp"

namespace daedalus::harness {

inline constexpr int kScenarioSchemaVersion = 1;

enum class ControllerKind { daedalus, hpa, static_scaleout };

const char* to_string(ControllerKind kind) noexcept;

struct ControllerSpec {
  ControllerKind kind = ControllerKind::daedalus;
  std::string name;
  std::optional<int> initial_workers;
  control::ControllerConfig daedalus;
  baseline::ThresholdPolicy hpa;
  int fixed = 12;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name = "scenario";
  std::uint64_t seed = 1;
  // Seconds; 0 means the length of the workload trace.
  std::int64_t duration = 0;
  sim::ClusterSpec cluster;
  int initial_workers = 1;
  TraceSpec workload;
  std::vector<ControllerSpec> controllers;

  int initial_workers_for(const ControllerSpec& c) const;
};

// The "cluster" object of a scenario; `initial_workers` receives its
// initial_workers key (max_workers when absent).
sim::ClusterSpec parse_cluster(const nlohmann::json& j, int& initial_workers);

// Throws Error(parse_error) on malformed or invalid input.
Scenario parse_scenario(const nlohmann::json& j, const std::string& base_dir = {});
Scenario load_scenario(const std::string& path);

// The per-second workload every controller sees: the generated trace,
// repeated if it is shorter than the scenario. Checks that every value is
// non-negative and that the peak fits the maximum scale-out.
std::vector<double> scenario_trace(Scenario& scenario);

}  // namespace daedalus::harness

#endif  // DAEDALUS_SCENARIO_HPP
