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

#ifndef DAEDALUS_HOLT_FORECASTER_HPP
#define DAEDALUS_HOLT_FORECASTER_HPP

#include <cstddef>
#include <vector>

#include "daedalus/forecasting.hpp"

namespace daedalus::forecast {

struct HoltConfig {
  std::size_t horizon = kForecastHorizon;
  std::size_t fit_window = kRetrainWindow;
  // Lead time whose absolute error is minimised when tuning the smoothing
  // constants; matches the loop interval.
  std::size_t tuning_lead = 60;
  double min_seasonal_acf = 0.5;
  std::vector<double> alpha_grid{0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
  std::vector<double> beta_grid{0.0005, 0.002, 0.01, 0.05, 0.2};
};

// Detects a dominant period as the strongest autocorrelation peak past the
// first zero crossing of the linearly detrended series. Returns 0 when no
// lag up to half the series length correlates above min_acf.
std::size_t detect_period(std::span<const double> series, double min_acf);

// Holt's linear (level + trend) exponential smoothing over the series with an
// additive seasonal profile removed. The profile is estimated once per fit
// by classical decomposition at the detected period.
class HoltSeasonalForecaster final : public Forecaster {
 public:
  explicit HoltSeasonalForecaster(HoltConfig config = {});

  void fit(const WorkloadSeries& history) override;
  void update(const WorkloadSeries& latest) override;
  Forecast forecast() const override;
  bool fitted() const noexcept override { return fitted_; }
  double known_until() const noexcept override { return next_time_; }

  std::size_t period() const noexcept { return season_.size(); }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

 private:
  double seasonal(double time) const noexcept;
  void step(double time, double value) noexcept;

  HoltConfig config_;
  bool fitted_ = false;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double level_ = 0.0;
  double trend_ = 0.0;
  double next_time_ = 0.0;
  double season_origin_ = 0.0;
  std::vector<double> season_;
};

}  // namespace daedalus::forecast

#endif  // DAEDALUS_HOLT_FORECASTER_HPP
