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

#include "daedalus/forecasting.hpp"

#include <algorithm>
#include <cmath>

#include "daedalus/error.hpp"

namespace daedalus::forecast {

double wape(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.empty() || actual.size() != forecast.size()) {
    throw Error(ErrorCode::invalid_argument, "wape needs two non-empty series of equal length");
  }
  double error = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    error += std::abs(actual[i] - forecast[i]);
    total += actual[i];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::undefined_score, "wape undefined for a zero actual total");
  return error / total;
}

Forecast fallback_forecast(const WorkloadSeries& recent, std::size_t horizon) {
  if (recent.size() < kMinFallbackHistory) {
    throw Error(ErrorCode::insufficient_history, "fallback forecast needs at least 60 s of workload");
  }
  const auto n = static_cast<double>(recent.size());
  const double mean_x = (n - 1.0) / 2.0;
  const double mean_y = recent.mean();
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < recent.size(); ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxx += dx * dx;
    sxy += dx * (recent.rates[i] - mean_y);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;

  Forecast out;
  out.start = recent.end();
  out.source = ForecastSource::fallback;
  out.values.resize(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    const double x = n + static_cast<double>(k);
    out.values[k] = std::max(0.0, mean_y + slope * (x - mean_x));
  }
  return out;
}

Forecast select_forecast(Forecast primary, std::optional<double> previous_wape, const WorkloadSeries& recent,
                         double poor_threshold) {
  if (!previous_wape || *previous_wape <= poor_threshold) return primary;
  return fallback_forecast(recent, primary.values.empty() ? kForecastHorizon : primary.values.size());
}

QualityUpdate record_quality(ForecasterHealth health, std::optional<double> wape, double poor_threshold,
                             int retrain_after) {
  QualityUpdate out;
  const bool poor = !wape || *wape > poor_threshold;
  health.last_wape = wape.value_or(1.0);
  health.consecutive_poor = poor ? health.consecutive_poor + 1 : 0;
  if (poor && health.consecutive_poor >= retrain_after && !health.retraining) {
    health.retraining = true;
    out.retrain = true;
  }
  out.health = health;
  return out;
}

}  // namespace daedalus::forecast
