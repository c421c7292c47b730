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

#ifndef DAEDALUS_SERIES_HPP
#define DAEDALUS_SERIES_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace daedalus::forecast {

// Workload rates (tuples/s) at one-second granularity; rates[k] belongs to
// timestamp start + k.
struct WorkloadSeries {
  double start = 0.0;
  std::vector<double> rates;

  std::size_t size() const noexcept { return rates.size(); }
  bool empty() const noexcept { return rates.empty(); }
  // Timestamp one past the last sample.
  double end() const noexcept { return start + static_cast<double>(rates.size()); }

  WorkloadSeries tail(std::size_t n) const;
  // Appends a series that begins exactly at end(); overlapping samples are
  // skipped. Throws Error(invalid_argument) on a gap.
  void append(const WorkloadSeries& next);
  void keep_last(std::size_t n);
  double sum() const noexcept;
  double mean() const noexcept;
};

enum class ForecastSource { primary, fallback };

inline constexpr std::size_t kForecastHorizon = 900;

// values[k] predicts the workload at start + k.
struct Forecast {
  double start = 0.0;
  std::vector<double> values;
  ForecastSource source = ForecastSource::primary;

  // Maximum over the first `seconds` values (at least one, at most all).
  double max_over(std::size_t seconds) const noexcept;
  double max() const noexcept { return max_over(values.size()); }
  std::span<const double> first(std::size_t n) const noexcept;
};

}  // namespace daedalus::forecast

#endif  // DAEDALUS_SERIES_HPP
