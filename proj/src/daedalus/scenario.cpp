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

#include "daedalus/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "daedalus/error.hpp"

namespace daedalus::harness {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

const json& object_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object()) fail(std::string("scenario needs an object '") + key + "'");
  return j.at(key);
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) fail(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string text(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      fail("unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

sim::ClusterSpec parse_cluster(const json& c, int& initial_workers) {
  reject_unknown(c,
                 {"max_workers", "unit_capacity", "capacity_jitter", "keys", "checkpoint_interval", "downtime_out",
                  "downtime_in", "cpu_noise", "base_latency", "initial_workers"},
                 "cluster");
  sim::ClusterSpec s;
  s.max_workers = integer(c, "max_workers", s.max_workers);
  s.unit_capacity = num(c, "unit_capacity", s.unit_capacity);
  s.capacity_jitter = num(c, "capacity_jitter", s.capacity_jitter);
  s.checkpoint_interval = num(c, "checkpoint_interval", s.checkpoint_interval);
  s.downtime_out = num(c, "downtime_out", s.downtime_out);
  s.downtime_in = num(c, "downtime_in", s.downtime_in);
  s.cpu_noise = num(c, "cpu_noise", s.cpu_noise);
  s.base_latency = num(c, "base_latency", s.base_latency);
  initial_workers = integer(c, "initial_workers", s.max_workers);
  if (c.contains("keys")) {
    const json& k = c.at("keys");
    if (!k.is_object()) fail("'keys' must be an object");
    reject_unknown(k, {"count", "distribution", "zipf_exponent", "weights", "assignment", "key_groups"}, "keys");
    s.key_count = integer(k, "count", s.key_count);
    const std::string dist = text(k, "distribution", "uniform");
    if (dist == "uniform") {
      s.distribution = sim::KeyDistribution::uniform;
    } else if (dist == "zipf") {
      s.distribution = sim::KeyDistribution::zipf;
    } else if (dist == "explicit") {
      s.distribution = sim::KeyDistribution::explicit_weights;
    } else {
      fail("unknown key distribution '" + dist + "'");
    }
    s.zipf_exponent = num(k, "zipf_exponent", s.zipf_exponent);
    if (k.contains("weights")) {
      if (!k.at("weights").is_array()) fail("'weights' must be an array");
      for (const auto& w : k.at("weights")) {
        if (!w.is_number()) fail("key weights must be numbers");
        s.explicit_weights.push_back(w.get<double>());
      }
    }
    const std::string assignment = text(k, "assignment", "hash");
    if (assignment == "hash") {
      s.assignment = sim::Assignment::hash;
    } else if (assignment == "round_robin") {
      s.assignment = sim::Assignment::round_robin;
    } else {
      fail("unknown key assignment '" + assignment + "'");
    }
    s.key_groups = integer(k, "key_groups", s.key_groups);
  }
  try {
    s.validate();
  } catch (const Error& e) {
    fail(std::string("cluster: ") + e.what());
  }
  if (initial_workers < 1 || initial_workers > s.max_workers) fail("cluster.initial_workers outside [1, max_workers]");
  return s;
}

namespace {

ControllerSpec parse_controller(const json& c, const sim::ClusterSpec& cluster) {
  if (!c.is_object()) fail("controllers must be objects");
  ControllerSpec spec;
  const std::string type = text(c, "type", "");
  if (c.contains("initial_workers")) {
    spec.initial_workers = integer(c, "initial_workers", 1);
    if (*spec.initial_workers < 1 || *spec.initial_workers > cluster.max_workers) {
      fail("controller initial_workers outside [1, max_workers]");
    }
  }
  if (type == "daedalus") {
    reject_unknown(c,
                   {"type", "name", "initial_workers", "target_recovery_time", "downtime_scale_out",
                    "downtime_scale_in", "loop_interval", "grace_period", "recheck_window", "poor_wape",
                    "retrain_after", "fallback_window", "observed_max_age"},
                   "daedalus controller");
    spec.kind = ControllerKind::daedalus;
    auto& d = spec.daedalus;
    d.max_scaleout = cluster.max_workers;
    d.recovery.checkpoint_interval = cluster.checkpoint_interval;
    d.recovery.target_recovery_time = num(c, "target_recovery_time", d.recovery.target_recovery_time);
    d.recovery.downtime_scale_out = num(c, "downtime_scale_out", d.recovery.downtime_scale_out);
    d.recovery.downtime_scale_in = num(c, "downtime_scale_in", d.recovery.downtime_scale_in);
    d.timing.loop_interval = num(c, "loop_interval", d.timing.loop_interval);
    d.timing.grace_period = num(c, "grace_period", d.timing.grace_period);
    d.timing.recheck_window = num(c, "recheck_window", d.timing.recheck_window);
    d.poor_wape = num(c, "poor_wape", d.poor_wape);
    d.retrain_after = integer(c, "retrain_after", d.retrain_after);
    d.fallback_window = static_cast<std::size_t>(integer(c, "fallback_window", static_cast<int>(d.fallback_window)));
    d.observed_max_age = num(c, "observed_max_age", d.observed_max_age);
    d.synchronous_handoff = true;
    if (d.timing.loop_interval != std::floor(d.timing.loop_interval)) fail("loop_interval must be whole seconds");
    try {
      d.validate();
    } catch (const Error& e) {
      fail(std::string("daedalus controller: ") + e.what());
    }
    spec.name = text(c, "name", "daedalus");
  } else if (type == "hpa") {
    reject_unknown(c,
                   {"type", "name", "initial_workers", "target_utilization", "eval_interval", "stabilization_window",
                    "tolerance", "min_replicas"},
                   "hpa controller");
    spec.kind = ControllerKind::hpa;
    auto& h = spec.hpa;
    h.target_utilization = num(c, "target_utilization", h.target_utilization);
    h.eval_interval = num(c, "eval_interval", h.eval_interval);
    h.stabilization_window = num(c, "stabilization_window", h.stabilization_window);
    h.tolerance = num(c, "tolerance", h.tolerance);
    h.min_replicas = integer(c, "min_replicas", h.min_replicas);
    h.max_replicas = cluster.max_workers;
    if (h.eval_interval != std::floor(h.eval_interval)) fail("eval_interval must be whole seconds");
    try {
      h.validate();
    } catch (const Error& e) {
      fail(std::string("hpa controller: ") + e.what());
    }
    char name[32];
    std::snprintf(name, sizeof name, "hpa-%02d", static_cast<int>(std::lround(h.target_utilization * 100.0)));
    spec.name = text(c, "name", name);
  } else if (type == "static") {
    reject_unknown(c, {"type", "name", "workers"}, "static controller");
    spec.kind = ControllerKind::static_scaleout;
    spec.fixed = integer(c, "workers", cluster.max_workers);
    if (spec.fixed < 1 || spec.fixed > cluster.max_workers) fail("static workers outside [1, max_workers]");
    spec.initial_workers = spec.fixed;
    spec.name = text(c, "name", "static-" + std::to_string(spec.fixed));
  } else {
    fail("unknown controller type '" + type + "'");
  }
  for (char ch : spec.name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      fail("controller name '" + spec.name + "' may only use letters, digits, '-', '_' and '.'");
    }
  }
  return spec;
}

}  // namespace

const char* to_string(ControllerKind kind) noexcept {
  switch (kind) {
    case ControllerKind::daedalus: return "daedalus";
    case ControllerKind::hpa: return "hpa";
    case ControllerKind::static_scaleout: return "static";
  }
  return "unknown";
}

int Scenario::initial_workers_for(const ControllerSpec& c) const {
  if (c.kind == ControllerKind::static_scaleout) return c.fixed;
  return c.initial_workers.value_or(initial_workers);
}

Scenario parse_scenario(const json& j, const std::string& base_dir) {
  if (!j.is_object()) fail("scenario must be a JSON object");
  reject_unknown(j, {"schema_version", "name", "seed", "duration", "cluster", "workload", "controllers"}, "scenario");
  Scenario s;
  if (!j.contains("schema_version")) fail("scenario needs 'schema_version'");
  s.schema_version = integer(j, "schema_version", 0);
  if (s.schema_version != kScenarioSchemaVersion) {
    fail("unsupported schema_version " + std::to_string(s.schema_version));
  }
  s.name = text(j, "name", s.name);
  if (j.contains("seed")) {
    const auto& seed = j.at("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      fail("'seed' must be a non-negative integer");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("duration")) {
    if (!j.at("duration").is_number_integer() || j.at("duration").get<std::int64_t>() <= 0) {
      fail("'duration' must be a positive integer");
    }
    s.duration = j.at("duration").get<std::int64_t>();
  }
  s.cluster = parse_cluster(object_at(j, "cluster"), s.initial_workers);
  s.workload = parse_trace_spec(object_at(j, "workload"), base_dir);
  if (!j.contains("controllers") || !j.at("controllers").is_array() || j.at("controllers").empty()) {
    fail("scenario needs a non-empty 'controllers' array");
  }
  std::set<std::string> names;
  for (const auto& c : j.at("controllers")) {
    s.controllers.push_back(parse_controller(c, s.cluster));
    if (!names.insert(s.controllers.back().name).second) {
      fail("duplicate controller name '" + s.controllers.back().name + "'");
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open scenario " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
  return parse_scenario(j, std::filesystem::path(path).parent_path().string());
}

std::vector<double> scenario_trace(Scenario& scenario) {
  const forecast::WorkloadSeries base = generate_trace(scenario.workload);
  if (base.empty()) fail("workload trace is empty");
  if (scenario.duration <= 0) scenario.duration = static_cast<std::int64_t>(base.size());
  std::vector<double> trace(static_cast<std::size_t>(scenario.duration));
  for (std::size_t t = 0; t < trace.size(); ++t) trace[t] = base.rates[t % base.size()];

  double peak = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (!(trace[t] >= 0.0) || !std::isfinite(trace[t])) {
      fail("workload value at t=" + std::to_string(t) + " is negative or not finite");
    }
    peak = std::max(peak, trace[t]);
  }
  const sim::Simulator probe(scenario.cluster, 1, scenario.seed);
  const double max_capacity = probe.ground_truth_capacity(scenario.cluster.max_workers);
  if (peak > max_capacity) {
    fail("peak workload " + std::to_string(peak) + " exceeds the capacity at the maximum scale-out (" +
         std::to_string(max_capacity) + ")");
  }
  return trace;
}

}  // namespace daedalus::harness
