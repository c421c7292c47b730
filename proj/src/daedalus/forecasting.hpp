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

#ifndef DAEDALUS_FORECASTING_HPP
#define DAEDALUS_FORECASTING_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>

#include "daedalus/series.hpp"

namespace daedalus::forecast {

inline constexpr double kPoorForecastWape = 0.25;
inline constexpr int kRetrainAfterPoor = 15;
inline constexpr std::size_t kMinFitHistory = 120;
inline constexpr std::size_t kMinFallbackHistory = 60;
inline constexpr std::size_t kRetrainWindow = 7200;

// Workload forecaster. fit() must see at least kMinFitHistory seconds;
// update() extends the known history; forecast() predicts kForecastHorizon
// seconds starting at the end of the known history.
class Forecaster {
 public:
  virtual ~Forecaster() = default;

  virtual void fit(const WorkloadSeries& history) = 0;
  virtual void update(const WorkloadSeries& latest) = 0;
  virtual Forecast forecast() const = 0;
  virtual bool fitted() const noexcept = 0;
  // Timestamp one past the last sample the model has seen.
  virtual double known_until() const noexcept = 0;
};

// sum |actual - forecast| / sum actual. Throws Error(invalid_argument) on
// empty or mismatched input and Error(undefined_score) when the actual total
// is zero.
double wape(std::span<const double> actual, std::span<const double> forecast);

// Least-squares line over `recent` projected `horizon` seconds past its end,
// clamped at zero.
Forecast fallback_forecast(const WorkloadSeries& recent, std::size_t horizon = kForecastHorizon);

// The primary forecast unless the previous one scored worse than the
// threshold. A missing score (nothing to compare yet) keeps the primary.
Forecast select_forecast(Forecast primary, std::optional<double> previous_wape, const WorkloadSeries& recent,
                         double poor_threshold = kPoorForecastWape);

struct ForecasterHealth {
  int consecutive_poor = 0;
  double last_wape = 0.0;
  bool retraining = false;
};

struct QualityUpdate {
  ForecasterHealth health;
  bool retrain = false;
};

// An undefined score (std::nullopt) counts as poor.
QualityUpdate record_quality(ForecasterHealth health, std::optional<double> wape,
                             double poor_threshold = kPoorForecastWape, int retrain_after = kRetrainAfterPoor);

}  // namespace daedalus::forecast

#endif  // DAEDALUS_FORECASTING_HPP
