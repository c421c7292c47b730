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

#include "daedalus/daedalus.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <limits>
#include <new>
#include <string>

#include "daedalus/decision.hpp"
#include "daedalus/error.hpp"
#include "daedalus/experiment.hpp"
#include "daedalus/holt_forecaster.hpp"
#include "daedalus/regression.hpp"
#include "daedalus/report.hpp"
#include "daedalus/scenario.hpp"
#include "daedalus/simulator.hpp"
#include "daedalus/trace.hpp"

struct dd_regression {
  daedalus::model::RegressionState state;
};

struct dd_forecaster {
  daedalus::forecast::HoltSeasonalForecaster model;
};

struct dd_simulator {
  daedalus::sim::Simulator sim;
};

namespace {

using daedalus::Error;
using daedalus::ErrorCode;

thread_local std::string last_error;

dd_status fail(dd_status status, const char* what) {
  last_error = what;
  return status;
}

template <class Fn>
dd_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    last_error.clear();
    return DD_OK;
  } catch (const Error& e) {
    return fail(static_cast<dd_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(DD_PARSE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DD_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DD_INTERNAL, e.what());
  } catch (...) {
    return fail(DD_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

std::vector<double> copy(const double* p, std::size_t n) {
  require(n == 0 || p != nullptr, "null array");
  return std::vector<double>(p, p + n);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

DD_API const char* dd_version(void) { return "0.1.0"; }

DD_API const char* dd_status_name(dd_status status) {
  if (status == DD_OK) return "ok";
  return daedalus::to_string(static_cast<ErrorCode>(status));
}

DD_API const char* dd_last_error(void) { return last_error.c_str(); }

DD_API void dd_string_free(char* s) { std::free(s); }

DD_API dd_status dd_regression_create(dd_regression** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new dd_regression{};
  });
}

DD_API void dd_regression_destroy(dd_regression* r) { delete r; }

DD_API dd_status dd_regression_update(dd_regression* r, double cpu, double throughput) {
  return guarded([&] {
    require(r != nullptr, "null regression");
    require(std::isfinite(cpu) && std::isfinite(throughput), "sample must be finite");
    r->state = daedalus::model::update_regression(r->state, {0, 0.0, cpu, throughput});
  });
}

DD_API dd_status dd_regression_count(const dd_regression* r, uint64_t* count) {
  return guarded([&] {
    require(r != nullptr && count != nullptr, "null argument");
    *count = r->state.count;
  });
}

DD_API dd_status dd_regression_coefficients(const dd_regression* r, double* intercept, double* slope) {
  return guarded([&] {
    require(r != nullptr && intercept != nullptr && slope != nullptr, "null argument");
    if (r->state.count < 2 || r->state.cpu_variance() < daedalus::model::kMinCpuVariance) {
      throw Error(ErrorCode::insufficient_data, "regression needs two samples with distinct cpu");
    }
    *intercept = r->state.intercept();
    *slope = r->state.slope();
  });
}

DD_API dd_status dd_regression_predict(const dd_regression* r, double cpu_desired, double* capacity) {
  return guarded([&] {
    require(r != nullptr && capacity != nullptr, "null argument");
    *capacity = daedalus::model::predict_capacity(r->state, cpu_desired);
  });
}

DD_API dd_status dd_simple_capacity(double throughput, double cpu, double* capacity) {
  return guarded([&] {
    require(capacity != nullptr, "null output");
    *capacity = daedalus::model::simple_capacity(throughput, cpu);
  });
}

DD_API dd_status dd_worker_max_cpu(double worker_cpu, double max_cpu_among_workers, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = daedalus::model::worker_max_cpu(worker_cpu, max_cpu_among_workers);
  });
}

DD_API dd_status dd_wape(const double* actual, const double* forecast, size_t n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    require(n == 0 || (actual && forecast), "null array");
    *out = daedalus::forecast::wape({actual, n}, {forecast, n});
  });
}

DD_API dd_status dd_fallback_forecast(const double* recent, size_t n, size_t horizon, double* out) {
  return guarded([&] {
    require(horizon == 0 || out != nullptr, "null output");
    const auto f = daedalus::forecast::fallback_forecast({0.0, copy(recent, n)}, horizon);
    std::copy(f.values.begin(), f.values.end(), out);
  });
}

DD_API dd_status dd_forecaster_create(dd_forecaster** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = new dd_forecaster{};
  });
}

DD_API void dd_forecaster_destroy(dd_forecaster* f) { delete f; }

DD_API dd_status dd_forecaster_fit(dd_forecaster* f, double start, const double* rates, size_t n) {
  return guarded([&] {
    require(f != nullptr, "null forecaster");
    f->model.fit({start, copy(rates, n)});
  });
}

DD_API dd_status dd_forecaster_update(dd_forecaster* f, double start, const double* rates, size_t n) {
  return guarded([&] {
    require(f != nullptr, "null forecaster");
    f->model.update({start, copy(rates, n)});
  });
}

DD_API size_t dd_forecaster_horizon(void) { return daedalus::forecast::kForecastHorizon; }

DD_API dd_status dd_forecaster_forecast(const dd_forecaster* f, double* out, size_t capacity) {
  return guarded([&] {
    require(f != nullptr && out != nullptr, "null argument");
    const auto fc = f->model.forecast();
    require(capacity >= fc.values.size(), "output buffer shorter than the horizon");
    std::copy(fc.values.begin(), fc.values.end(), out);
  });
}

DD_API dd_status dd_accumulated_backlog(const double* history, size_t history_len, const double* forecast,
                                        size_t forecast_len, double checkpoint_interval, double downtime,
                                        double* backlog) {
  return guarded([&] {
    require(backlog != nullptr, "null output");
    const auto n = static_cast<double>(history_len);
    *backlog = daedalus::recovery::accumulated_backlog({0.0, copy(history, history_len)},
                                                       {n, copy(forecast, forecast_len)}, checkpoint_interval,
                                                       downtime);
  });
}

DD_API dd_status dd_predict_recovery_time(double capacity, const double* forecast, size_t forecast_len,
                                          double backlog, double downtime, double* total, int* feasible) {
  return guarded([&] {
    require(total != nullptr && feasible != nullptr, "null output");
    const auto p =
        daedalus::recovery::predict_recovery_time(capacity, {0.0, copy(forecast, forecast_len)}, backlog, downtime);
    *total = p.total;
    *feasible = p.feasible ? 1 : 0;
  });
}

DD_API void dd_decision_inputs_init(dd_decision_inputs* in) {
  if (!in) return;
  *in = dd_decision_inputs{};
  const daedalus::recovery::RecoveryConfig rc;
  const daedalus::control::Timing timing;
  in->current = 1;
  in->max_scaleout = 1;
  in->since_last_rescale = std::numeric_limits<double>::infinity();
  in->since_last_action = std::numeric_limits<double>::infinity();
  in->checkpoint_interval = rc.checkpoint_interval;
  in->downtime_scale_out = rc.downtime_scale_out;
  in->downtime_scale_in = rc.downtime_scale_in;
  in->target_recovery_time = rc.target_recovery_time;
  in->loop_interval = timing.loop_interval;
  in->grace_period = timing.grace_period;
  in->recheck_window = timing.recheck_window;
}

DD_API dd_status dd_decide(const dd_decision_inputs* in, dd_decision* out) {
  return guarded([&] {
    require(in != nullptr && out != nullptr, "null argument");
    require(in->max_scaleout >= 1 && in->capacities != nullptr, "capacities required");
    namespace ctl = daedalus::control;
    ctl::DecisionInputs d;
    d.now = in->now;
    d.current = in->current;
    d.max_scaleout = in->max_scaleout;
    d.capacities = daedalus::model::CapacityTable(in->max_scaleout);
    for (int i = 1; i <= in->max_scaleout; ++i) {
      const double c = in->capacities[i - 1];
      if (std::isnan(c)) continue;
      d.capacities.set(i, {c, daedalus::model::CapacitySource::predicted, in->now});
    }
    d.average_workload = in->average_workload;
    d.forecast = {in->now, copy(in->forecast, in->forecast_len), daedalus::forecast::ForecastSource::primary};
    d.consumer_lag = in->consumer_lag;
    d.since_last_rescale = in->since_last_rescale;
    d.since_last_action = in->since_last_action;
    d.recent_workload = {in->now - static_cast<double>(in->recent_len), copy(in->recent, in->recent_len)};
    d.recovery.checkpoint_interval = in->checkpoint_interval;
    d.recovery.downtime_scale_out = in->downtime_scale_out;
    d.recovery.downtime_scale_in = in->downtime_scale_in;
    d.recovery.target_recovery_time = in->target_recovery_time;
    d.recovery.validate();
    d.timing = {in->loop_interval, in->grace_period, in->recheck_window};
    const auto decision = ctl::decide(d);
    out->target = decision.target;
    out->reason = static_cast<dd_reason>(decision.reason);
    out->predicted_recovery = decision.predicted_recovery.value_or(std::numeric_limits<double>::quiet_NaN());
    out->recovery_target_violated = decision.recovery_target_violated ? 1 : 0;
  });
}

DD_API dd_status dd_simulator_create(const char* cluster_json, int initial_workers, uint64_t seed,
                                     dd_simulator** out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto j = nlohmann::json::parse(cluster_json ? cluster_json : "{}");
    int default_initial = 1;
    const auto spec = daedalus::harness::parse_cluster(j, default_initial);
    *out = new dd_simulator{daedalus::sim::Simulator(spec, initial_workers, seed)};
  });
}

DD_API void dd_simulator_destroy(dd_simulator* s) { delete s; }

DD_API dd_status dd_simulator_step(dd_simulator* s, double workload_rate, dd_second* out) {
  return guarded([&] {
    require(s != nullptr, "null simulator");
    require(std::isfinite(workload_rate) && workload_rate >= 0.0, "workload must be finite and non-negative");
    const auto& r = s->sim.step(workload_rate);
    if (out) {
      *out = dd_second{r.time, r.arrivals, r.processed, r.backlog, r.workers, r.down ? 1 : 0, r.latency, r.cpu_avg};
    }
  });
}

DD_API dd_status dd_simulator_rescale(dd_simulator* s, int target) {
  return guarded([&] {
    require(s != nullptr, "null simulator");
    s->sim.rescale(target);
  });
}

DD_API dd_status dd_simulator_ground_truth(const dd_simulator* s, int scaleout, double* capacity) {
  return guarded([&] {
    require(s != nullptr && capacity != nullptr, "null argument");
    require(scaleout >= 1 && scaleout <= s->sim.spec().max_workers, "scale-out out of range");
    *capacity = s->sim.ground_truth_capacity(scaleout);
  });
}

DD_API dd_status dd_run_experiment(const char* scenario_path, int override_seed, uint64_t seed, const char* out_dir,
                                   int verbose, char** summary) {
  bool failed = false;
  const dd_status st = guarded([&] {
    require(scenario_path != nullptr, "null scenario path");
    auto scenario = daedalus::harness::load_scenario(scenario_path);
    if (override_seed) scenario.seed = seed;
    const auto result =
        daedalus::harness::run_experiment(std::move(scenario), out_dir ? out_dir : "", verbose ? &std::cerr : nullptr);
    if (summary) *summary = dup(result.summary_text);
    failed = result.any_failed();
  });
  if (st == DD_OK && failed) return fail(DD_CONTROLLER_FAILED, "one or more controllers failed");
  return st;
}

DD_API dd_status dd_generate_trace(const char* spec, const char* out_path, size_t* length) {
  return guarded([&] {
    require(spec != nullptr && out_path != nullptr, "null argument");
    const auto series = daedalus::harness::generate_trace(daedalus::harness::parse_trace_argument(spec));
    daedalus::harness::write_trace_csv(series, out_path);
    if (length) *length = series.size();
  });
}

DD_API dd_status dd_report(const char* run_dir, char** summary) {
  return guarded([&] {
    require(run_dir != nullptr, "null run directory");
    const auto text = daedalus::harness::report_run_directory(run_dir);
    if (summary) *summary = dup(text);
  });
}

}  // extern "C"
