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

#ifndef DAEDALUS_HANDOFF_HPP
#define DAEDALUS_HANDOFF_HPP

#include <chrono>
#include <future>
#include <optional>
#include <utility>

namespace daedalus {

// Single-producer, single-consumer handoff of one result computed on a
// background thread. The consumer either polls without blocking or, for
// reproducible simulated runs, waits.
template <typename T>
class Handoff {
 public:
  bool pending() const noexcept { return future_.valid(); }

  template <typename Fn>
  void launch(Fn&& fn) {
    future_ = std::async(std::launch::async, std::forward<Fn>(fn));
  }

  // Returns the result if it is ready (or, when `block` is set, once it is).
  // Rethrows anything the task threw.
  std::optional<T> take(bool block) {
    if (!future_.valid()) return std::nullopt;
    if (!block && future_.wait_for(std::chrono::seconds(0)) != std::future_status::ready) return std::nullopt;
    return future_.get();
  }

 private:
  std::future<T> future_;
};

}  // namespace daedalus

#endif  // DAEDALUS_HANDOFF_HPP
