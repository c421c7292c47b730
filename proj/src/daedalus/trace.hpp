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

#ifndef DAEDALUS_TRACE_HPP
#define DAEDALUS_TRACE_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "daedalus/series.hpp"

namespace daedalus::harness {

// offset + amplitude * sin(2 pi periods t / duration + phase)
struct SineTrace {
  double amplitude = 25000.0;
  double offset = 30000.0;
  double periods = 2.0;
  double duration = 21600.0;
  double phase = 0.0;
};

// base everywhere, base + spike_height on [position, position + spike_width).
struct SpikeTrace {
  double base = 5000.0;
  double spike_height = 45000.0;
  double spike_width = 600.0;
  std::vector<double> positions;
  double duration = 21600.0;
};

// One rate per line (the last column when a line has several), optionally
// preceded by a header line; '#' starts a comment.
struct CsvTrace {
  std::string path;
  double scale_factor = 1.0;
};

using TraceSpec = std::variant<SineTrace, SpikeTrace, CsvTrace>;

// Relative CSV paths resolve against base_dir.
TraceSpec parse_trace_spec(const nlohmann::json& j, const std::string& base_dir = {});

// Either a path to a JSON trace spec or the inline form
// "kind:key=value,key=value", e.g. "sine:amplitude=25000,offset=30000".
TraceSpec parse_trace_argument(std::string_view argument);

forecast::WorkloadSeries generate_trace(const TraceSpec& spec);

// Throws Error(parse_error) naming the offending line.
std::vector<double> read_trace_csv(const std::string& path);

void write_trace_csv(const forecast::WorkloadSeries& series, const std::string& path);

}  // namespace daedalus::harness

#endif  // DAEDALUS_TRACE_HPP
