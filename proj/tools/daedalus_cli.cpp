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

// daedalus: run autoscaling experiments on the stream processing simulator.
//
//   daedalus run <scenario.json> [--seed N] [--out DIR] [--verbose]
//   daedalus trace <spec> --out FILE
//   daedalus report <run-dir>
//
// DAEDALUS_SEED sets the seed when --seed is not given.
// Exit status: 0 success, 1 scenario or input error, 2 controller failure.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "daedalus/daedalus.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenario = 1;
constexpr int kExitController = 2;

int report_failure(dd_status status, const char* what) {
  std::cerr << "daedalus: " << what << ": " << dd_last_error() << " (" << dd_status_name(status) << ")\n";
  return status == DD_CONTROLLER_FAILED ? kExitController : kExitScenario;
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("DAEDALUS_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long seed = std::strtoull(v, &end, 10);
  if (*end != '\0') {
    std::cerr << "daedalus: ignoring non-numeric DAEDALUS_SEED '" << v << "'\n";
    return std::nullopt;
  }
  return seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Daedalus autoscaler experiments"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log every controller loop to stderr");

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run every controller of a scenario");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Simulator seed (overrides the scenario and DAEDALUS_SEED)");
  run->add_option("--out", out_dir, "Directory for CSVs and the summary");
  run->add_flag("-v,--verbose", verbose, "Log every controller loop to stderr");

  std::string trace_spec;
  std::string trace_out;
  auto* trace = app.add_subcommand("trace", "Write a workload trace as CSV");
  trace->add_option("spec", trace_spec, "Trace spec file or kind:key=value,...")->required();
  trace->add_option("--out", trace_out, "Output CSV")->required();

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Recompute the summary of a run directory");
  report->add_option("run-dir", run_dir, "Directory written by 'run --out'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitScenario;
  }

  if (*run) {
    if (!seed) seed = env_seed();
    char* summary = nullptr;
    const dd_status st = dd_run_experiment(scenario_path.c_str(), seed ? 1 : 0, seed.value_or(0),
                                           out_dir.empty() ? nullptr : out_dir.c_str(), verbose ? 1 : 0, &summary);
    if (summary) {
      std::cout << summary;
      dd_string_free(summary);
    }
    if (st != DD_OK) return report_failure(st, "run");
    return kExitOk;
  }
  if (*trace) {
    std::size_t length = 0;
    const dd_status st = dd_generate_trace(trace_spec.c_str(), trace_out.c_str(), &length);
    if (st != DD_OK) return report_failure(st, "trace");
    std::cout << "wrote " << length << " samples to " << trace_out << '\n';
    return kExitOk;
  }
  if (*report) {
    char* summary = nullptr;
    const dd_status st = dd_report(run_dir.c_str(), &summary);
    if (st != DD_OK) return report_failure(st, "report");
    std::cout << summary;
    dd_string_free(summary);
    return kExitOk;
  }
  return kExitScenario;
}
