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

// Independent reference computations the tests compare against.

#ifndef DAEDALUS_TESTS_ORACLES_HPP
#define DAEDALUS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "daedalus/decision.hpp"

namespace oracle {

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
};

// Ordinary least squares from the normal equations, two passes.
inline Line batch_ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

// Mean and population variance, two passes.
inline std::pair<double, double> mean_var(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, s / static_cast<double>(v.size())};
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-12});
}

// Integral of a unit-step sequence over [from, to), from prefix sums.
inline double step_integral(const std::vector<double>& v, double from, double to) {
  std::vector<double> prefix(v.size() + 1, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) prefix[k + 1] = prefix[k] + v[k];
  auto cumulative = [&](double x) {
    x = std::clamp(x, 0.0, static_cast<double>(v.size()));
    const auto k = static_cast<std::size_t>(x);
    return k == v.size() ? prefix[k] : prefix[k] + (x - static_cast<double>(k)) * v[k];
  };
  return to > from ? cumulative(to) - cumulative(from) : 0.0;
}

// Recovery time for one candidate, recomputed from scratch: replay the last
// checkpoint interval, queue the forecast during downtime, then drain with
// the spare capacity second by second from the first whole second after the
// restart.
inline double recovery_time(double capacity, const std::vector<double>& recent, const std::vector<double>& forecast,
                            double checkpoint, double downtime) {
  const double n = static_cast<double>(recent.size());
  const double backlog = step_integral(recent, n - checkpoint, n) + step_integral(forecast, 0.0, downtime);
  if (backlog <= 0.0) return downtime;
  double drained = 0.0;
  const auto first = static_cast<std::size_t>(std::llround(downtime));
  for (std::size_t s = first; s < forecast.size(); ++s) {
    drained += std::max(0.0, capacity - forecast[s]);
    if (drained >= backlog) return downtime + static_cast<double>(s - first + 1);
  }
  return std::numeric_limits<double>::infinity();
}

inline double max_first(const std::vector<double>& f, double seconds) {
  const auto n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1.0, std::ceil(seconds))), 1, f.size());
  return *std::max_element(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(n));
}

struct Expected {
  int target = 0;
  daedalus::control::DecisionReason reason{};
};

// Enumerates every scale-out and every condition, then takes the smallest
// scale-out in the qualifying set.
inline Expected brute_force_decide(const daedalus::control::DecisionInputs& in) {
  using R = daedalus::control::DecisionReason;
  if (in.since_last_action < in.timing.grace_period) return {in.current, R::grace_period};
  const std::vector<double>& f = in.forecast.values;
  const double c_now = in.capacities.capacity(in.current);
  if (in.since_last_rescale < in.timing.recheck_window && c_now > in.average_workload &&
      c_now > max_first(f, in.timing.loop_interval)) {
    return {in.current, R::recent_rescale_ok};
  }
  const double full_max = *std::max_element(f.begin(), f.end());
  std::vector<int> qualifying;
  for (int i = 1; i <= in.max_scaleout; ++i) {
    const double c = in.capacities.capacity(i);
    const bool covers_average = c > in.average_workload;
    const double downtime = i < in.current ? in.recovery.downtime_scale_in : in.recovery.downtime_scale_out;
    const double rt = c > 0.0 ? recovery_time(c, in.recent_workload.rates, f, in.recovery.checkpoint_interval, downtime)
                              : std::numeric_limits<double>::infinity();
    const bool recovers = std::isfinite(rt) && rt <= in.recovery.target_recovery_time;
    const bool covers_recovery = recovers && c >= max_first(f, rt);
    const bool lag_ok = i >= in.current || c >= in.consumer_lag;
    const bool covers_horizon = c > full_max;
    if (i == in.current && covers_average && recovers && covers_recovery) qualifying.push_back(i);
    if (i != in.current && covers_average && recovers && covers_recovery && lag_ok && covers_horizon) {
      qualifying.push_back(i);
    }
  }
  if (qualifying.empty()) return {in.max_scaleout, R::forced_max};
  const int best = *std::min_element(qualifying.begin(), qualifying.end());
  if (best == in.current) return {best, R::no_change};
  return {best, best > in.current ? R::scale_out : R::scale_in};
}

// Random planner inputs covering every branch: grace period, recent
// rescale, lag deferral, infeasible recovery and forced maximum.
inline daedalus::control::DecisionInputs random_inputs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(1, 12);
  daedalus::control::DecisionInputs in;
  in.max_scaleout = pick(rng);
  in.current = std::uniform_int_distribution<int>(1, in.max_scaleout)(rng);
  in.now = 10000.0;
  in.capacities = daedalus::model::CapacityTable(in.max_scaleout);
  const double unit = 2000.0 + 4000.0 * u(rng);
  for (int i = 1; i <= in.max_scaleout; ++i) {
    const double skew = 0.8 + 0.2 * u(rng);
    in.capacities.set(i, {unit * i * skew, daedalus::model::CapacitySource::predicted, in.now});
  }
  const double level = unit * in.max_scaleout * (0.05 + 0.9 * u(rng));
  const double slope = (u(rng) - 0.5) * level / 600.0;
  const double wiggle = u(rng) * 0.2 * level;
  std::vector<double> f(900);
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = std::max(0.0, level + slope * static_cast<double>(k) + wiggle * std::sin(static_cast<double>(k) / 60.0));
  }
  in.forecast = {in.now, f};
  in.average_workload = std::max(0.0, level * (0.8 + 0.4 * u(rng)));
  in.consumer_lag = u(rng) < 0.5 ? 0.0 : u(rng) * unit * in.max_scaleout * 2.0;
  in.recent_workload = {in.now - 11.0, std::vector<double>(11, level * (0.9 + 0.2 * u(rng)))};
  in.since_last_action = u(rng) < 0.2 ? 200.0 * u(rng) : 180.0 + 2000.0 * u(rng);
  in.since_last_rescale = std::max(in.since_last_action, u(rng) < 0.5 ? 700.0 * u(rng) : 5000.0);
  in.recovery.target_recovery_time = u(rng) < 0.2 ? 120.0 : 600.0;
  if (u(rng) < 0.3) {
    // Downtimes as the controller learns them: not whole seconds.
    in.recovery.downtime_scale_out = 20.0 + 20.0 * u(rng);
    in.recovery.downtime_scale_in = 10.0 + 10.0 * u(rng);
  }
  return in;
}

}  // namespace oracle

#endif  // DAEDALUS_TESTS_ORACLES_HPP
