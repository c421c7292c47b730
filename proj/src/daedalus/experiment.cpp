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

#include "daedalus/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>

#include "daedalus/baselines.hpp"
#include "daedalus/error.hpp"

namespace daedalus::harness {
namespace {

std::string event_text(const char* reason, int from, int to) {
  return std::string(reason) + ':' + std::to_string(from) + "->" + std::to_string(to);
}

SecondRow to_row(const sim::SecondRecord& rec, double workload) {
  SecondRow row;
  row.time = rec.time;
  row.workload = workload;
  row.throughput = rec.processed;
  row.workers = rec.workers;
  row.cpu_avg = rec.cpu_avg;
  row.consumer_lag = rec.backlog;
  row.latency = rec.latency;
  return stored(std::move(row));
}

LoopRow to_loop(const control::TickReport& r, std::int64_t t, int workers, double truth) {
  LoopRow row;
  row.time = t;
  row.loop = r.loop;
  row.workers = workers;
  row.estimated_capacity = r.estimated_capacity;
  row.true_capacity = truth;
  row.wape = r.wape;
  if (r.forecast_source) {
    row.forecast_source = *r.forecast_source == forecast::ForecastSource::primary ? "primary" : "fallback";
  }
  if (r.decision) {
    row.reason = control::to_string(r.decision->reason);
    row.target = r.decision->target;
    row.predicted_recovery = r.decision->predicted_recovery;
  } else {
    row.reason = r.skipped ? "skipped" : "no-plan";
    row.target = workers;
  }
  row.executed = r.executed;
  row.retrain_signal = r.retrain_signal;
  row.error = r.error;
  return stored(std::move(row));
}

std::string log_line(const std::string& name, const LoopRow& row) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "[%s] t=%lld loop=%llu workers=%d capacity=%s true=%.1f wape=%s source=%s %s -> %d%s",
                name.c_str(), static_cast<long long>(row.time), static_cast<unsigned long long>(row.loop),
                row.workers,
                row.estimated_capacity ? std::to_string(static_cast<long long>(*row.estimated_capacity)).c_str() : "-",
                row.true_capacity, row.wape ? std::to_string(*row.wape).c_str() : "-",
                row.forecast_source.empty() ? "-" : row.forecast_source.c_str(), row.reason.c_str(), row.target,
                row.executed ? " (executed)" : "");
  std::string s = buf;
  if (row.predicted_recovery) s += " rt=" + std::to_string(*row.predicted_recovery);
  if (!row.error.empty()) s += " error=" + row.error;
  return s;
}

// Mean CPU over the last `window` seconds the current workers were running.
std::optional<double> ready_cpu(const sim::Simulator& sim, std::int64_t window) {
  const auto& recs = sim.records();
  double sum = 0.0;
  int n = 0;
  for (auto it = recs.rbegin(); it != recs.rend() && it->time >= sim.now() - window; ++it) {
    if (it->time < sim.last_restart()) break;
    if (it->down) continue;
    sum += it->cpu_avg;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

ControllerRun run_controller(const Scenario& scenario, const ControllerSpec& spec, const std::vector<double>& trace,
                             const RunHooks& hooks) {
  ControllerRun run;
  run.name = spec.name;
  run.kind = spec.kind;
  run.rt_target = spec.daedalus.recovery.target_recovery_time;

  sim::Simulator sim(scenario.cluster, scenario.initial_workers_for(spec), scenario.seed);
  sim::SimulatorMetricsProvider provider(sim);
  sim::SimulatorExecutor executor(sim);

  std::optional<control::Controller> controller;
  std::optional<baseline::HpaAutoscaler> hpa;
  std::int64_t loop = 0;
  std::int64_t eval = 0;
  try {
    switch (spec.kind) {
      case ControllerKind::daedalus: {
        control::ControllerConfig cfg = spec.daedalus;
        cfg.max_scaleout = scenario.cluster.max_workers;
        cfg.recovery.checkpoint_interval = scenario.cluster.checkpoint_interval;
        cfg.synchronous_handoff = true;
        controller.emplace(cfg);
        loop = static_cast<std::int64_t>(cfg.timing.loop_interval);
        break;
      }
      case ControllerKind::hpa: {
        baseline::ThresholdPolicy policy = spec.hpa;
        policy.max_replicas = scenario.cluster.max_workers;
        hpa.emplace(policy);
        eval = static_cast<std::int64_t>(policy.eval_interval);
        break;
      }
      case ControllerKind::static_scaleout:
        break;
    }

    run.seconds.reserve(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const auto t = static_cast<std::int64_t>(i);
      std::string event;
      if (controller && t > 0 && t % loop == 0) {
        const int before = sim.active_workers();
        const double truth = sim.ground_truth_capacity();
        const control::TickReport report = controller->tick(provider, executor);
        LoopRow row = to_loop(report, t, before, truth);
        if (report.executed) event = event_text(row.reason.c_str(), report.from, report.to);
        for (const auto& m : report.recoveries) run.measured.push_back(m);
        if (hooks.log) hooks.log(log_line(run.name, row));
        run.loops.push_back(std::move(row));
        if (hooks.on_tick) hooks.on_tick(report, sim);
      }
      if (hpa && t > 0 && t % eval == 0 && !sim.down()) {
        if (const auto cpu = ready_cpu(sim, eval)) {
          const int current = sim.active_workers();
          const int desired = hpa->decide(static_cast<double>(t), current, *cpu);
          if (desired != current) {
            executor.rescale(desired);
            event = event_text(desired > current ? "scale-out" : "scale-in", current, desired);
          }
          if (hooks.log) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "[%s] t=%lld workers=%d cpu=%.4f desired=%d", run.name.c_str(),
                          static_cast<long long>(t), current, *cpu, desired);
            hooks.log(buf);
          }
        }
      }
      const sim::SecondRecord& rec = sim.step(trace[i]);
      SecondRow row = to_row(rec, trace[i]);
      row.event = std::move(event);
      run.seconds.push_back(std::move(row));
      if (hooks.on_second) hooks.on_second(sim);
    }
  } catch (const std::exception& e) {
    run.failed = true;
    run.error = e.what();
  }
  if (controller) {
    run.recovery_timeouts = controller->recovery_timeouts();
    run.forced_violations = controller->forced_recovery_violations();
  }
  return run;
}

bool ExperimentResult::any_failed() const {
  for (const auto& r : runs) {
    if (r.failed) return true;
  }
  return false;
}

ExperimentResult run_experiment(Scenario scenario, const std::string& out_dir, std::ostream* log) {
  const std::vector<double> trace = scenario_trace(scenario);

  struct Pending {
    std::future<ControllerRun> run;
    std::vector<std::string> lines;
  };
  std::vector<Pending> pending(scenario.controllers.size());
  for (std::size_t i = 0; i < scenario.controllers.size(); ++i) {
    RunHooks hooks;
    if (log) hooks.log = [lines = &pending[i].lines](const std::string& s) { lines->push_back(s); };
    pending[i].run = std::async(std::launch::async, [&scenario, &trace, i, hooks] {
      return run_controller(scenario, scenario.controllers[i], trace, hooks);
    });
  }

  ExperimentResult result;
  for (auto& p : pending) {
    result.runs.push_back(p.run.get());
    if (log) {
      for (const auto& s : p.lines) *log << s << '\n';
    }
  }

  RunMeta& meta = result.meta;
  meta.scenario = scenario.name;
  meta.seed = scenario.seed;
  meta.duration = scenario.duration;
  meta.max_workers = scenario.cluster.max_workers;
  const ControllerSpec* reference = nullptr;
  for (const auto& c : scenario.controllers) {
    if (c.kind != ControllerKind::static_scaleout) continue;
    if (!reference || (c.fixed == scenario.cluster.max_workers && reference->fixed != c.fixed)) reference = &c;
  }
  if (reference) meta.reference = reference->name;

  for (const auto& run : result.runs) {
    meta.controllers.push_back(run.name);
    auto& d = meta.details[run.name];
    d["kind"] = to_string(run.kind);
    d["status"] = run.failed ? "failed" : "ok";
    if (run.failed) d["error"] = run.error;
    d["rt_target_s"] = std::to_string(static_cast<long long>(run.rt_target));
    if (run.kind == ControllerKind::daedalus) {
      d["recovery_timeouts"] = std::to_string(run.recovery_timeouts);
      d["forced_rt_violations"] = std::to_string(run.forced_violations);
    }
    RunSummary s = summarize(run.name, to_string(run.kind), run.seconds, run.loops, run.rt_target);
    s.failed = run.failed;
    s.error = run.error;
    result.summaries.push_back(std::move(s));
  }
  normalize_usage(result.summaries, meta.reference, meta.max_workers);
  result.summary_text = format_summary(meta, result.summaries);

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::io_error, "cannot create " + out_dir + ": " + ec.message());
    const fs::path root(out_dir);
    for (const auto& run : result.runs) {
      write_seconds_csv((root / (run.name + ".csv")).string(), run.seconds);
      if (run.kind == ControllerKind::daedalus) {
        write_loops_csv((root / (run.name + "_loops.csv")).string(), run.loops);
      }
    }
    write_run_meta((root / "run.meta").string(), meta);
    std::ofstream out(root / "summary.txt", std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write summary.txt");
    out << result.summary_text;
  }
  return result;
}

}  // namespace daedalus::harness
