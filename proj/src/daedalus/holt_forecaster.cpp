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

#include "daedalus/holt_forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "daedalus/error.hpp"

namespace daedalus::forecast {
namespace {

std::vector<double> detrend(std::span<const double> y) {
  const auto n = static_cast<double>(y.size());
  const double mean_x = (n - 1.0) / 2.0;
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxx += dx * dx;
    sxy += dx * (y[i] - mean_y);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  std::vector<double> r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    r[i] = y[i] - mean_y - slope * (static_cast<double>(i) - mean_x);
  }
  return r;
}

// Seasonal profile by classical additive decomposition: deviations from a
// centred moving average of one period, averaged per phase, zero mean.
std::vector<double> seasonal_profile(std::span<const double> y, std::size_t period) {
  const std::size_t n = y.size();
  const std::size_t half = period / 2;
  std::vector<double> sum(period, 0.0);
  std::vector<int> count(period, 0);
  double window = 0.0;
  for (std::size_t i = 0; i < period; ++i) window += y[i];
  // window covers [t - half, t - half + period)
  for (std::size_t t = half; t + period - half <= n; ++t) {
    const double trend = window / static_cast<double>(period);
    sum[t % period] += y[t] - trend;
    count[t % period] += 1;
    const std::size_t out = t - half;
    const std::size_t in = t - half + period;
    if (in < n) window += y[in] - y[out];
  }
  std::vector<double> profile(period, 0.0);
  double mean = 0.0;
  for (std::size_t k = 0; k < period; ++k) {
    profile[k] = count[k] > 0 ? sum[k] / count[k] : 0.0;
    mean += profile[k];
  }
  mean /= static_cast<double>(period);
  for (auto& v : profile) v -= mean;
  return profile;
}

struct Smoothed {
  double level;
  double trend;
};

Smoothed initial_state(std::span<const double> x) {
  const std::size_t k = std::min<std::size_t>(x.size() - 1, 60);
  const double trend = k > 0 ? (x[k] - x[0]) / static_cast<double>(k) : 0.0;
  return {x[0], trend};
}

double tuning_error(std::span<const double> x, double alpha, double beta, std::size_t lead) {
  Smoothed s = initial_state(x);
  double error = 0.0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    const double prev_level = s.level;
    s.level = alpha * x[t] + (1.0 - alpha) * (s.level + s.trend);
    s.trend = beta * (s.level - prev_level) + (1.0 - beta) * s.trend;
    if (t + lead < x.size()) error += std::abs(x[t + lead] - (s.level + static_cast<double>(lead) * s.trend));
  }
  return error;
}

}  // namespace

std::size_t detect_period(std::span<const double> series, double min_acf) {
  const std::size_t n = series.size();
  if (n < 8) return 0;
  const std::vector<double> r = detrend(series);
  double variance = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    variance += r[i] * r[i];
    scale += series[i] * series[i];
  }
  variance /= static_cast<double>(n);
  scale /= static_cast<double>(n);
  if (variance <= 1e-12 * std::max(scale, 1.0)) return 0;

  const std::size_t max_lag = n / 2;
  std::vector<double> acf(max_lag + 1, 0.0);
  std::size_t first_negative = 0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += r[t] * r[t + lag];
    acf[lag] = s / static_cast<double>(n - lag) / variance;
    if (first_negative == 0 && acf[lag] < 0.0) first_negative = lag;
  }
  if (first_negative == 0) return 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t lag = first_negative; lag <= max_lag; ++lag) best = std::max(best, acf[lag]);
  if (best < min_acf) return 0;
  // Shortest lag close to the best peak, so multiples of the period lose.
  for (std::size_t lag = first_negative; lag <= max_lag; ++lag) {
    const bool peak = acf[lag] >= acf[lag - 1] && (lag == max_lag || acf[lag] >= acf[lag + 1]);
    if (peak && acf[lag] >= 0.9 * best) return lag;
  }
  return 0;
}

HoltSeasonalForecaster::HoltSeasonalForecaster(HoltConfig config) : config_(std::move(config)) {
  if (config_.alpha_grid.empty() || config_.beta_grid.empty() || config_.horizon == 0) {
    throw Error(ErrorCode::invalid_argument, "holt forecaster needs a parameter grid and a horizon");
  }
}

void HoltSeasonalForecaster::fit(const WorkloadSeries& history) {
  if (history.size() < kMinFitHistory) {
    throw Error(ErrorCode::insufficient_history, "forecaster fit needs at least 120 s of workload");
  }
  const WorkloadSeries window = history.tail(config_.fit_window);
  const std::span<const double> y(window.rates);

  season_.clear();
  season_origin_ = window.start;
  const std::size_t period = detect_period(y, config_.min_seasonal_acf);
  if (period >= 2) season_ = seasonal_profile(y, period);

  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = y[i] - seasonal(window.start + static_cast<double>(i));

  const std::size_t lead = std::min(config_.tuning_lead, x.size() / 2);
  double best = std::numeric_limits<double>::infinity();
  for (double a : config_.alpha_grid) {
    for (double b : config_.beta_grid) {
      const double e = tuning_error(x, a, b, lead);
      if (e < best) {
        best = e;
        alpha_ = a;
        beta_ = b;
      }
    }
  }

  const Smoothed init = initial_state(x);
  level_ = init.level;
  trend_ = init.trend;
  for (std::size_t t = 1; t < x.size(); ++t) {
    const double prev_level = level_;
    level_ = alpha_ * x[t] + (1.0 - alpha_) * (level_ + trend_);
    trend_ = beta_ * (level_ - prev_level) + (1.0 - beta_) * trend_;
  }
  next_time_ = window.end();
  fitted_ = true;
}

void HoltSeasonalForecaster::update(const WorkloadSeries& latest) {
  if (!fitted_) throw Error(ErrorCode::unfit_model, "forecaster used before fit");
  if (latest.empty()) return;
  if (latest.start - next_time_ > 0.5) {
    throw Error(ErrorCode::invalid_argument, "forecaster update leaves a gap in the workload history");
  }
  for (std::size_t i = 0; i < latest.size(); ++i) {
    const double t = latest.start + static_cast<double>(i);
    if (t < next_time_ - 0.5) continue;
    step(t, latest.rates[i]);
  }
}

void HoltSeasonalForecaster::step(double time, double value) noexcept {
  const double x = value - seasonal(time);
  const double prev_level = level_;
  level_ = alpha_ * x + (1.0 - alpha_) * (level_ + trend_);
  trend_ = beta_ * (level_ - prev_level) + (1.0 - beta_) * trend_;
  next_time_ = time + 1.0;
}

Forecast HoltSeasonalForecaster::forecast() const {
  if (!fitted_) throw Error(ErrorCode::unfit_model, "forecaster used before fit");
  Forecast out;
  out.start = next_time_;
  out.source = ForecastSource::primary;
  out.values.resize(config_.horizon);
  for (std::size_t k = 0; k < config_.horizon; ++k) {
    const double h = static_cast<double>(k + 1);
    const double t = next_time_ + static_cast<double>(k);
    out.values[k] = std::max(0.0, level_ + h * trend_ + seasonal(t));
  }
  return out;
}

double HoltSeasonalForecaster::seasonal(double time) const noexcept {
  if (season_.empty()) return 0.0;
  const auto p = static_cast<long long>(season_.size());
  long long idx = std::llround(time - season_origin_) % p;
  if (idx < 0) idx += p;
  return season_[static_cast<std::size_t>(idx)];
}

}  // namespace daedalus::forecast
