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

#include "daedalus/trace.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "daedalus/error.hpp"

namespace daedalus::harness {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(std::string_view text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

double number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorCode::parse_error, std::string("trace field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw Error(ErrorCode::parse_error, std::string(what) + " must be positive");
}

}  // namespace

TraceSpec parse_trace_spec(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw Error(ErrorCode::parse_error, "workload spec needs a string 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "sine") {
    SineTrace s;
    s.amplitude = number(j, "amplitude", s.amplitude);
    s.offset = number(j, "offset", s.offset);
    s.periods = number(j, "periods", s.periods);
    s.duration = number(j, "duration", s.duration);
    s.phase = number(j, "phase", s.phase);
    require_positive(s.duration, "sine duration");
    if (s.amplitude < 0.0 || s.offset - s.amplitude < 0.0) {
      throw Error(ErrorCode::parse_error, "sine trace must stay non-negative (offset >= amplitude >= 0)");
    }
    return s;
  }
  if (type == "spikes") {
    SpikeTrace s;
    s.base = number(j, "base", s.base);
    s.spike_height = number(j, "spike_height", s.spike_height);
    s.spike_width = number(j, "spike_width", s.spike_width);
    s.duration = number(j, "duration", s.duration);
    if (j.contains("positions")) {
      if (!j.at("positions").is_array()) throw Error(ErrorCode::parse_error, "'positions' must be an array");
      for (const auto& p : j.at("positions")) {
        if (!p.is_number()) throw Error(ErrorCode::parse_error, "spike positions must be numbers");
        s.positions.push_back(p.get<double>());
      }
    }
    require_positive(s.duration, "spike duration");
    if (s.base < 0.0 || s.base + s.spike_height < 0.0 || s.spike_width < 0.0) {
      throw Error(ErrorCode::parse_error, "spike trace must stay non-negative");
    }
    return s;
  }
  if (type == "csv") {
    CsvTrace c;
    if (!j.contains("path") || !j.at("path").is_string()) throw Error(ErrorCode::parse_error, "csv trace needs 'path'");
    c.path = j.at("path").get<std::string>();
    if (!base_dir.empty() && std::filesystem::path(c.path).is_relative()) {
      c.path = (std::filesystem::path(base_dir) / c.path).string();
    }
    c.scale_factor = number(j, "scale_factor", 1.0);
    if (c.scale_factor < 0.0) throw Error(ErrorCode::parse_error, "scale_factor must be non-negative");
    return c;
  }
  throw Error(ErrorCode::parse_error, "unknown workload type '" + type + "'");
}

TraceSpec parse_trace_argument(std::string_view argument) {
  const std::string arg = trim(argument);
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::parse_error, arg + ": " + e.what());
    }
    return parse_trace_spec(j, std::filesystem::path(arg).parent_path().string());
  }
  const auto colon = arg.find(':');
  nlohmann::json j;
  j["type"] = trim(std::string_view(arg).substr(0, colon));
  if (colon != std::string::npos) {
    std::stringstream rest(arg.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::parse_error, "expected key=value, got '" + item + "'");
      const std::string key = trim(std::string_view(item).substr(0, eq));
      const std::string value = trim(std::string_view(item).substr(eq + 1));
      if (key == "positions") {
        nlohmann::json list = nlohmann::json::array();
        std::stringstream ps(value);
        std::string p;
        while (std::getline(ps, p, ';')) {
          double v = 0.0;
          if (!parse_double(p, v)) throw Error(ErrorCode::parse_error, "bad spike position '" + p + "'");
          list.push_back(v);
        }
        j[key] = list;
      } else if (key == "path") {
        j[key] = value;
      } else {
        double v = 0.0;
        if (!parse_double(value, v)) throw Error(ErrorCode::parse_error, "bad value for '" + key + "': '" + value + "'");
        j[key] = v;
      }
    }
  }
  return parse_trace_spec(j);
}

forecast::WorkloadSeries generate_trace(const TraceSpec& spec) {
  forecast::WorkloadSeries out;
  if (const auto* s = std::get_if<SineTrace>(&spec)) {
    const auto n = static_cast<std::size_t>(std::llround(s->duration));
    out.rates.resize(n);
    const double omega = 2.0 * std::numbers::pi * s->periods / s->duration;
    for (std::size_t t = 0; t < n; ++t) {
      out.rates[t] = std::max(0.0, s->offset + s->amplitude * std::sin(omega * static_cast<double>(t) + s->phase));
    }
  } else if (const auto* k = std::get_if<SpikeTrace>(&spec)) {
    const auto n = static_cast<std::size_t>(std::llround(k->duration));
    out.rates.assign(n, k->base);
    for (double pos : k->positions) {
      for (std::size_t t = 0; t < n; ++t) {
        const auto time = static_cast<double>(t);
        if (time >= pos && time < pos + k->spike_width) out.rates[t] = k->base + k->spike_height;
      }
    }
  } else {
    const auto& c = std::get<CsvTrace>(spec);
    out.rates = read_trace_csv(c.path);
    for (auto& v : out.rates) v *= c.scale_factor;
  }
  return out;
}

std::vector<double> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open trace file " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string content = trim(std::string_view(line).substr(0, hash));
    if (content.empty()) continue;
    const auto comma = content.find_last_of(',');
    const std::string_view field =
        comma == std::string::npos ? std::string_view(content) : std::string_view(content).substr(comma + 1);
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line_no) + ": not a number: '" + trim(field) + "'");
    }
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line_no) + ": workload must be a finite value >= 0");
    }
    header_allowed = false;
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorCode::parse_error, path + ": trace has no values");
  return values;
}

void write_trace_csv(const forecast::WorkloadSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "time_s,workload\n";
  char buf[64];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.3f\n", static_cast<long long>(series.start) + static_cast<long long>(i),
                  series.rates[i]);
    out << buf;
  }
}

}  // namespace daedalus::harness
