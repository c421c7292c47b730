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

#include "daedalus/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "daedalus/error.hpp"

namespace daedalus::forecast {

WorkloadSeries WorkloadSeries::tail(std::size_t n) const {
  n = std::min(n, rates.size());
  WorkloadSeries out;
  out.start = end() - static_cast<double>(n);
  out.rates.assign(rates.end() - static_cast<std::ptrdiff_t>(n), rates.end());
  return out;
}

void WorkloadSeries::append(const WorkloadSeries& next) {
  if (next.empty()) return;
  if (rates.empty()) {
    *this = next;
    return;
  }
  const double gap = next.start - end();
  if (gap > 0.5) throw Error(ErrorCode::invalid_argument, "workload series must be contiguous");
  const auto skip = static_cast<std::size_t>(std::llround(std::max(-gap, 0.0)));
  if (skip >= next.rates.size()) return;
  rates.insert(rates.end(), next.rates.begin() + static_cast<std::ptrdiff_t>(skip), next.rates.end());
}

void WorkloadSeries::keep_last(std::size_t n) {
  if (rates.size() <= n) return;
  const std::size_t drop = rates.size() - n;
  rates.erase(rates.begin(), rates.begin() + static_cast<std::ptrdiff_t>(drop));
  start += static_cast<double>(drop);
}

double WorkloadSeries::sum() const noexcept { return std::accumulate(rates.begin(), rates.end(), 0.0); }

double WorkloadSeries::mean() const noexcept {
  return rates.empty() ? 0.0 : sum() / static_cast<double>(rates.size());
}

double Forecast::max_over(std::size_t seconds) const noexcept {
  if (values.empty()) return 0.0;
  const std::size_t n = std::clamp<std::size_t>(seconds, 1, values.size());
  return *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
}

std::span<const double> Forecast::first(std::size_t n) const noexcept {
  return std::span<const double>(values).first(std::min(n, values.size()));
}

}  // namespace daedalus::forecast
