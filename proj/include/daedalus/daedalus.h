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

/* C interface to the Daedalus autoscaler, its simulator and its harness.
 *
 * Every function returns a dd_status; DD_OK is zero. On failure the message
 * of the last error on the calling thread is available from dd_last_error().
 * Handles are opaque and owned by the caller, who releases them with the
 * matching _destroy function. Strings returned through char** are released
 * with dd_string_free(). */

#ifndef DAEDALUS_DAEDALUS_H
#define DAEDALUS_DAEDALUS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DAEDALUS_BUILDING)
#    define DD_API __declspec(dllexport)
#  else
#    define DD_API __declspec(dllimport)
#  endif
#else
#  define DD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dd_status {
  DD_OK = 0,
  DD_INVALID_ARGUMENT = 1,
  DD_UNDEFINED_CAPACITY = 2,
  DD_INSUFFICIENT_DATA = 3,
  DD_UNDEFINED_SKEW = 4,
  DD_UNFIT_MODEL = 5,
  DD_UNDEFINED_SCORE = 6,
  DD_INSUFFICIENT_HISTORY = 7,
  DD_INSUFFICIENT_SAMPLES = 8,
  DD_INVALID_TARGET = 9,
  DD_PARSE_ERROR = 10,
  DD_IO_ERROR = 11,
  DD_PROVIDER_UNAVAILABLE = 12,
  DD_EXECUTOR_FAILED = 13,
  DD_CONTROLLER_FAILED = 14,
  DD_INTERNAL = 99
} dd_status;

DD_API const char* dd_version(void);
DD_API const char* dd_status_name(dd_status status);
/* Message of the last failed call on this thread; "" if none. */
DD_API const char* dd_last_error(void);
DD_API void dd_string_free(char* s);

/* ---- capacity model ------------------------------------------------- */

typedef struct dd_regression dd_regression;

DD_API dd_status dd_regression_create(dd_regression** out);
DD_API void dd_regression_destroy(dd_regression* r);
/* Adds one (cpu, throughput) sample. */
DD_API dd_status dd_regression_update(dd_regression* r, double cpu, double throughput);
DD_API dd_status dd_regression_count(const dd_regression* r, uint64_t* count);
/* throughput = intercept + slope * cpu. DD_INSUFFICIENT_DATA until two
 * samples with distinct cpu values have been seen. */
DD_API dd_status dd_regression_coefficients(const dd_regression* r, double* intercept, double* slope);
DD_API dd_status dd_regression_predict(const dd_regression* r, double cpu_desired, double* capacity);

/* throughput / cpu. */
DD_API dd_status dd_simple_capacity(double throughput, double cpu, double* capacity);
/* The cpu a worker reaches when the busiest worker is at 100%. */
DD_API dd_status dd_worker_max_cpu(double worker_cpu, double max_cpu_among_workers, double* out);

/* ---- forecasting ---------------------------------------------------- */

DD_API dd_status dd_wape(const double* actual, const double* forecast, size_t n, double* out);
/* Least-squares line through `recent` extended `horizon` seconds; `out`
 * receives `horizon` values. */
DD_API dd_status dd_fallback_forecast(const double* recent, size_t n, size_t horizon, double* out);

typedef struct dd_forecaster dd_forecaster;

DD_API dd_status dd_forecaster_create(dd_forecaster** out);
DD_API void dd_forecaster_destroy(dd_forecaster* f);
/* Per-second rates starting at time `start`. */
DD_API dd_status dd_forecaster_fit(dd_forecaster* f, double start, const double* rates, size_t n);
DD_API dd_status dd_forecaster_update(dd_forecaster* f, double start, const double* rates, size_t n);
/* Number of values dd_forecaster_forecast writes. */
DD_API size_t dd_forecaster_horizon(void);
DD_API dd_status dd_forecaster_forecast(const dd_forecaster* f, double* out, size_t capacity);

/* ---- recovery time ---------------------------------------------------- */

/* Worst-case backlog after a restart. `history` ends where `forecast`
 * starts. */
DD_API dd_status dd_accumulated_backlog(const double* history, size_t history_len, const double* forecast,
                                        size_t forecast_len, double checkpoint_interval, double downtime,
                                        double* backlog);
/* Total recovery time (downtime included); `feasible` is 0 and `total` is
 * +inf when the backlog is not cleared within the forecast. */
DD_API dd_status dd_predict_recovery_time(double capacity, const double* forecast, size_t forecast_len,
                                          double backlog, double downtime, double* total, int* feasible);

/* ---- scaling decision --------------------------------------------------- */

typedef enum dd_reason {
  DD_REASON_NO_CHANGE = 0,
  DD_REASON_RECENT_RESCALE_OK = 1,
  DD_REASON_SCALE_OUT = 2,
  DD_REASON_SCALE_IN = 3,
  DD_REASON_FORCED_MAX = 4,
  DD_REASON_GRACE_PERIOD = 5
} dd_reason;

typedef struct dd_decision_inputs {
  double now;
  int current;
  int max_scaleout;
  /* capacities[i] is the capacity at scale-out i + 1; max_scaleout entries. */
  const double* capacities;
  double average_workload;
  const double* forecast;
  size_t forecast_len;
  double consumer_lag;
  double since_last_rescale;
  double since_last_action;
  /* Recent workload ending at `now`, at least one checkpoint interval long. */
  const double* recent;
  size_t recent_len;
  double checkpoint_interval;
  double downtime_scale_out;
  double downtime_scale_in;
  double target_recovery_time;
  double loop_interval;
  double grace_period;
  double recheck_window;
} dd_decision_inputs;

typedef struct dd_decision {
  int target;
  dd_reason reason;
  /* NaN when no recovery time was computed for the target. */
  double predicted_recovery;
  int recovery_target_violated;
} dd_decision;

/* Default timing and recovery settings, no history of actions. */
DD_API void dd_decision_inputs_init(dd_decision_inputs* inputs);
DD_API dd_status dd_decide(const dd_decision_inputs* inputs, dd_decision* out);

/* ---- simulator ---------------------------------------------------------- */

typedef struct dd_simulator dd_simulator;

typedef struct dd_second {
  int64_t time;
  int64_t arrivals;
  int64_t processed;
  int64_t backlog;
  int workers;
  int down;
  double latency;
  double cpu_avg;
} dd_second;

/* `cluster_json` uses the "cluster" object of the scenario format; NULL or
 * "{}" gives the defaults. */
DD_API dd_status dd_simulator_create(const char* cluster_json, int initial_workers, uint64_t seed,
                                     dd_simulator** out);
DD_API void dd_simulator_destroy(dd_simulator* s);
DD_API dd_status dd_simulator_step(dd_simulator* s, double workload_rate, dd_second* out);
DD_API dd_status dd_simulator_rescale(dd_simulator* s, int target);
DD_API dd_status dd_simulator_ground_truth(const dd_simulator* s, int scaleout, double* capacity);

/* ---- harness ------------------------------------------------------------ */

/* Runs a scenario file. `seed` overrides the file when `override_seed` is
 * non-zero. `out_dir` may be NULL. The summary text is returned through
 * `summary` if non-NULL. DD_CONTROLLER_FAILED when any controller failed;
 * the outputs are still written. */
DD_API dd_status dd_run_experiment(const char* scenario_path, int override_seed, uint64_t seed, const char* out_dir,
                                   int verbose, char** summary);
/* `spec` is a JSON trace file or the inline "kind:key=value,..." form. */
DD_API dd_status dd_generate_trace(const char* spec, const char* out_path, size_t* length);
/* Re-summarizes a run directory and rewrites its summary.txt. */
DD_API dd_status dd_report(const char* run_dir, char** summary);

#ifdef __cplusplus
}
#endif

#endif /* DAEDALUS_DAEDALUS_H */
