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

#include "daedalus/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "daedalus/error.hpp"

namespace daedalus::harness {

const char* const kSecondsHeader =
    "time_s,workload,throughput,workers,cpu_avg,consumer_lag,latency_p95_s,decision_event";
const char* const kLoopsHeader =
    "time_s,loop,workers,estimated_capacity,true_capacity,wape,forecast_source,reason,target,executed,"
    "predicted_recovery_s,retrain_signal,error";

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string opt(const std::optional<double>& v, int digits) {
  if (!v) return {};
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return fixed(*v, digits);
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

struct LineError {
  std::string path;
  std::size_t line;
  [[noreturn]] void operator()(const std::string& what) const {
    throw Error(ErrorCode::parse_error, path + ":" + std::to_string(line) + ": " + what);
  }
};

double to_double(const std::string& s, const LineError& err) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) err("bad number '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s, const LineError& err) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) err("bad integer '" + s + "'");
  return v;
}

std::optional<double> to_opt(const std::string& s, const LineError& err) {
  if (s.empty()) return std::nullopt;
  return to_double(s, err);
}

template <class Row, class Parse>
std::vector<Row> read_csv(const std::string& path, const char* header, std::size_t columns, Parse parse) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::vector<Row> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const LineError err{path, n};
    if (n == 1) {
      if (line != header) err("unexpected header");
      continue;
    }
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != columns) err("expected " + std::to_string(columns) + " columns");
    rows.push_back(parse(fields, err));
  }
  if (n == 0) throw Error(ErrorCode::parse_error, path + ": empty file");
  return rows;
}

void open_out(std::ofstream& out, const std::string& path) {
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
}

}  // namespace

namespace {

double as_stored(double v, int digits) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fixed(v, digits).c_str(), nullptr);
}

std::optional<double> as_stored(const std::optional<double>& v, int digits) {
  if (!v) return v;
  return as_stored(*v, digits);
}

}  // namespace

SecondRow stored(SecondRow r) {
  r.workload = as_stored(r.workload, 3);
  r.cpu_avg = as_stored(r.cpu_avg, 4);
  r.latency = as_stored(r.latency, 3);
  return r;
}

LoopRow stored(LoopRow r) {
  r.estimated_capacity = as_stored(r.estimated_capacity, 3);
  r.true_capacity = as_stored(r.true_capacity, 3);
  r.wape = as_stored(r.wape, 6);
  r.predicted_recovery = as_stored(r.predicted_recovery, 3);
  return r;
}

std::string format_second(const SecondRow& r) {
  std::string s = std::to_string(r.time);
  s += ',' + fixed(r.workload, 3);
  s += ',' + std::to_string(r.throughput);
  s += ',' + std::to_string(r.workers);
  s += ',' + fixed(r.cpu_avg, 4);
  s += ',' + std::to_string(r.consumer_lag);
  s += ',' + fixed(r.latency, 3);
  s += ',' + sanitize(r.event);
  return s;
}

std::string format_loop(const LoopRow& r) {
  std::string s = std::to_string(r.time);
  s += ',' + std::to_string(r.loop);
  s += ',' + std::to_string(r.workers);
  s += ',' + opt(r.estimated_capacity, 3);
  s += ',' + fixed(r.true_capacity, 3);
  s += ',' + opt(r.wape, 6);
  s += ',' + r.forecast_source;
  s += ',' + r.reason;
  s += ',' + std::to_string(r.target);
  s += r.executed ? ",1" : ",0";
  s += ',' + opt(r.predicted_recovery, 3);
  s += r.retrain_signal ? ",1" : ",0";
  s += ',' + sanitize(r.error);
  return s;
}

void write_seconds_csv(const std::string& path, std::span<const SecondRow> rows) {
  std::ofstream out;
  open_out(out, path);
  out << kSecondsHeader << '\n';
  for (const auto& r : rows) out << format_second(r) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "write failed: " + path);
}

void write_loops_csv(const std::string& path, std::span<const LoopRow> rows) {
  std::ofstream out;
  open_out(out, path);
  out << kLoopsHeader << '\n';
  for (const auto& r : rows) out << format_loop(r) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "write failed: " + path);
}

std::vector<SecondRow> read_seconds_csv(const std::string& path) {
  return read_csv<SecondRow>(path, kSecondsHeader, 8, [](const std::vector<std::string>& f, const LineError& err) {
    SecondRow r;
    r.time = to_int(f[0], err);
    r.workload = to_double(f[1], err);
    r.throughput = to_int(f[2], err);
    r.workers = static_cast<int>(to_int(f[3], err));
    r.cpu_avg = to_double(f[4], err);
    r.consumer_lag = to_int(f[5], err);
    r.latency = to_double(f[6], err);
    r.event = f[7];
    return r;
  });
}

std::vector<LoopRow> read_loops_csv(const std::string& path) {
  return read_csv<LoopRow>(path, kLoopsHeader, 13, [](const std::vector<std::string>& f, const LineError& err) {
    LoopRow r;
    r.time = to_int(f[0], err);
    r.loop = static_cast<std::uint64_t>(to_int(f[1], err));
    r.workers = static_cast<int>(to_int(f[2], err));
    r.estimated_capacity = to_opt(f[3], err);
    r.true_capacity = to_double(f[4], err);
    r.wape = to_opt(f[5], err);
    r.forecast_source = f[6];
    r.reason = f[7];
    r.target = static_cast<int>(to_int(f[8], err));
    r.executed = f[9] == "1";
    r.predicted_recovery = to_opt(f[10], err);
    r.retrain_signal = f[11] == "1";
    r.error = f[12];
    return r;
  });
}

std::vector<ActionRecovery> action_recoveries(std::span<const SecondRow> rows) {
  std::vector<ActionRecovery> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].event.empty()) continue;
    ActionRecovery a;
    a.time = rows[i].time;
    const auto colon = rows[i].event.find(':');
    const auto arrow = rows[i].event.find("->");
    if (colon != std::string::npos && arrow != std::string::npos) {
      a.from = std::atoi(rows[i].event.c_str() + colon + 1);
      a.to = std::atoi(rows[i].event.c_str() + arrow + 2);
    }
    a.pre_lag = i > 0 ? static_cast<double>(rows[i - 1].consumer_lag) : 0.0;
    for (std::size_t j = i; j < rows.size(); ++j) {
      const auto& r = rows[j];
      if (r.throughput > 0 && static_cast<double>(r.consumer_lag) <= std::max(a.pre_lag, r.workload)) {
        a.recovery = r.time + 1 - a.time;
        break;
      }
    }
    out.push_back(a);
  }
  return out;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

RunSummary summarize(const std::string& name, const std::string& kind, std::span<const SecondRow> seconds,
                     std::span<const LoopRow> loops, double rt_target) {
  RunSummary s;
  s.name = name;
  s.kind = kind;
  s.seconds = static_cast<std::int64_t>(seconds.size());
  std::vector<double> latency;
  latency.reserve(seconds.size());
  for (const auto& r : seconds) {
    s.worker_seconds += r.workers;
    latency.push_back(r.latency);
    s.max_lag = std::max(s.max_lag, r.consumer_lag);
  }
  if (!seconds.empty()) {
    s.avg_workers = s.worker_seconds / static_cast<double>(seconds.size());
    double sum = 0.0;
    for (double l : latency) sum += l;
    s.latency_mean = sum / static_cast<double>(latency.size());
    s.latency_p50 = percentile(latency, 50);
    s.latency_p95 = percentile(latency, 95);
    s.latency_p99 = percentile(latency, 99);
    s.latency_max = *std::max_element(latency.begin(), latency.end());
  }

  const std::int64_t end = seconds.empty() ? 0 : seconds.back().time + 1;
  for (const auto& a : action_recoveries(seconds)) {
    ++s.actions;
    if (a.recovery) {
      s.max_recovery = std::max(s.max_recovery, static_cast<double>(*a.recovery));
      if (static_cast<double>(*a.recovery) > rt_target) ++s.rt_violations;
    } else if (static_cast<double>(end - a.time) > rt_target) {
      ++s.rt_violations;
    }
  }

  s.loops = static_cast<int>(loops.size());
  double err_sum = 0.0;
  int within = 0;
  double wape_sum = 0.0;
  int wape_good = 0;
  for (const auto& l : loops) {
    if (l.estimated_capacity && l.true_capacity > 0.0) {
      const double e = std::abs(*l.estimated_capacity - l.true_capacity) / l.true_capacity;
      ++s.capacity_checks;
      err_sum += e;
      s.capacity_error_max = std::max(s.capacity_error_max, e);
      if (e <= 0.05) ++within;
    }
    if (l.wape && std::isfinite(*l.wape)) {
      ++s.wape_scores;
      wape_sum += *l.wape;
      if (*l.wape < 0.25) ++wape_good;
    }
    if (l.forecast_source == "fallback") ++s.fallback_loops;
    if (l.retrain_signal) ++s.retrain_signals;
  }
  if (s.capacity_checks > 0) {
    s.capacity_error_mean = err_sum / s.capacity_checks;
    s.capacity_within_5pct = static_cast<double>(within) / s.capacity_checks;
  }
  if (s.wape_scores > 0) {
    s.wape_mean = wape_sum / s.wape_scores;
    s.wape_good_fraction = static_cast<double>(wape_good) / s.wape_scores;
  }
  return s;
}

void normalize_usage(std::vector<RunSummary>& runs, const std::string& reference, int max_workers) {
  double base = 0.0;
  for (const auto& r : runs) {
    if (r.name == reference && !r.failed) base = r.worker_seconds;
  }
  for (auto& r : runs) {
    const double denom = base > 0.0 ? base : static_cast<double>(max_workers) * static_cast<double>(r.seconds);
    r.normalized_usage = denom > 0.0 ? r.worker_seconds / denom : 0.0;
  }
}

void write_run_meta(const std::string& path, const RunMeta& meta) {
  std::ofstream out;
  open_out(out, path);
  out << "scenario=" << meta.scenario << '\n';
  out << "seed=" << meta.seed << '\n';
  out << "duration_s=" << meta.duration << '\n';
  out << "max_workers=" << meta.max_workers << '\n';
  out << "reference=" << meta.reference << '\n';
  out << "controllers=";
  for (std::size_t i = 0; i < meta.controllers.size(); ++i) out << (i ? "," : "") << meta.controllers[i];
  out << '\n';
  for (const auto& name : meta.controllers) {
    auto it = meta.details.find(name);
    if (it == meta.details.end()) continue;
    for (const auto& [k, v] : it->second) out << name << '.' << k << '=' << sanitize(v) << '\n';
  }
}

RunMeta read_run_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  RunMeta meta;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const LineError err{path, n};
    const auto eq = line.find('=');
    if (eq == std::string::npos) err("expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "scenario") {
      meta.scenario = value;
    } else if (key == "seed") {
      meta.seed = static_cast<std::uint64_t>(to_int(value, err));
    } else if (key == "duration_s") {
      meta.duration = to_int(value, err);
    } else if (key == "max_workers") {
      meta.max_workers = static_cast<int>(to_int(value, err));
    } else if (key == "reference") {
      meta.reference = value;
    } else if (key == "controllers") {
      meta.controllers = split(value);
    } else {
      const auto dot = key.find('.');
      if (dot == std::string::npos) err("unknown key '" + key + "'");
      meta.details[key.substr(0, dot)][key.substr(dot + 1)] = value;
    }
  }
  return meta;
}

std::string format_summary(const RunMeta& meta, const std::vector<RunSummary>& runs) {
  std::ostringstream o;
  char buf[512];
  o << "scenario " << meta.scenario << ", seed " << meta.seed << ", " << meta.duration << " s, max "
    << meta.max_workers << " workers\n\n";
  std::snprintf(buf, sizeof buf, "%-14s %-7s %8s %6s %8s %8s %8s %8s %9s %7s %7s %8s %8s\n", "controller", "status",
                "workers", "usage", "lat_mean", "lat_p50", "lat_p95", "lat_p99", "lat_max", "actions", "rt_viol",
                "cap_err", "wape");
  o << buf;
  for (const auto& r : runs) {
    std::snprintf(buf, sizeof buf, "%-14s %-7s %8.3f %6.3f %8.3f %8.3f %8.3f %8.3f %9.3f %7d %7d %8s %8s\n",
                  r.name.c_str(), r.failed ? "FAILED" : "ok", r.avg_workers, r.normalized_usage, r.latency_mean,
                  r.latency_p50, r.latency_p95, r.latency_p99, r.latency_max, r.actions, r.rt_violations,
                  r.capacity_checks ? fixed(r.capacity_error_mean, 4).c_str() : "-",
                  r.wape_scores ? fixed(r.wape_mean, 4).c_str() : "-");
    o << buf;
  }
  for (const auto& r : runs) {
    if (r.failed) o << "\n" << r.name << " failed: " << r.error << '\n';
  }

  o << "\n[summary]\n";
  o << "scenario=" << meta.scenario << '\n';
  o << "seed=" << meta.seed << '\n';
  o << "duration_s=" << meta.duration << '\n';
  o << "reference=" << meta.reference << '\n';
  for (const auto& r : runs) {
    const std::string p = r.name + '.';
    o << p << "kind=" << r.kind << '\n';
    o << p << "status=" << (r.failed ? "failed" : "ok") << '\n';
    if (r.failed) o << p << "error=" << sanitize(r.error) << '\n';
    o << p << "seconds=" << r.seconds << '\n';
    o << p << "avg_workers=" << fixed(r.avg_workers, 4) << '\n';
    o << p << "worker_seconds=" << fixed(r.worker_seconds, 0) << '\n';
    o << p << "normalized_usage=" << fixed(r.normalized_usage, 4) << '\n';
    o << p << "latency_mean_s=" << fixed(r.latency_mean, 4) << '\n';
    o << p << "latency_p50_s=" << fixed(r.latency_p50, 4) << '\n';
    o << p << "latency_p95_s=" << fixed(r.latency_p95, 4) << '\n';
    o << p << "latency_p99_s=" << fixed(r.latency_p99, 4) << '\n';
    o << p << "latency_max_s=" << fixed(r.latency_max, 4) << '\n';
    o << p << "actions=" << r.actions << '\n';
    o << p << "rt_violations=" << r.rt_violations << '\n';
    o << p << "max_recovery_s=" << fixed(r.max_recovery, 0) << '\n';
    o << p << "max_consumer_lag=" << r.max_lag << '\n';
    if (r.loops > 0) {
      o << p << "loops=" << r.loops << '\n';
      o << p << "capacity_checks=" << r.capacity_checks << '\n';
      o << p << "capacity_error_mean=" << fixed(r.capacity_error_mean, 6) << '\n';
      o << p << "capacity_error_max=" << fixed(r.capacity_error_max, 6) << '\n';
      o << p << "capacity_within_5pct=" << fixed(r.capacity_within_5pct, 4) << '\n';
      o << p << "wape_scores=" << r.wape_scores << '\n';
      o << p << "wape_mean=" << fixed(r.wape_mean, 6) << '\n';
      o << p << "wape_below_threshold=" << fixed(r.wape_good_fraction, 4) << '\n';
      o << p << "fallback_loops=" << r.fallback_loops << '\n';
      o << p << "retrain_signals=" << r.retrain_signals << '\n';
    }
  }
  return o.str();
}

std::string report_run_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const RunMeta meta = read_run_meta((root / "run.meta").string());
  std::vector<RunSummary> runs;
  for (const auto& name : meta.controllers) {
    const auto& d = meta.details.count(name) ? meta.details.at(name) : std::map<std::string, std::string>{};
    auto get = [&](const char* k, const std::string& fallback) {
      auto it = d.find(k);
      return it == d.end() ? fallback : it->second;
    };
    const std::vector<SecondRow> seconds = read_seconds_csv((root / (name + ".csv")).string());
    std::vector<LoopRow> loops;
    if (fs::exists(root / (name + "_loops.csv"))) loops = read_loops_csv((root / (name + "_loops.csv")).string());
    RunSummary s = summarize(name, get("kind", "unknown"), seconds, loops, std::stod(get("rt_target_s", "600")));
    s.failed = get("status", "ok") != "ok";
    s.error = get("error", "");
    runs.push_back(std::move(s));
  }
  normalize_usage(runs, meta.reference, meta.max_workers);
  const std::string text = format_summary(meta, runs);
  std::ofstream out;
  open_out(out, (root / "summary.txt").string());
  out << text;
  return text;
}

}  // namespace daedalus::harness
