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

#ifndef DAEDALUS_ERROR_HPP
#define DAEDALUS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace daedalus {

// Numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  invalid_argument = 1,
  undefined_capacity = 2,
  insufficient_data = 3,
  undefined_skew = 4,
  unfit_model = 5,
  undefined_score = 6,
  insufficient_history = 7,
  insufficient_samples = 8,
  invalid_target = 9,
  parse_error = 10,
  io_error = 11,
  provider_unavailable = 12,
  executor_failed = 13,
  controller_failed = 14,
  internal = 99,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace daedalus

#endif  // DAEDALUS_ERROR_HPP
