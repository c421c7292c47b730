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

#include "daedalus/error.hpp"

namespace daedalus {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::undefined_capacity: return "undefined capacity";
    case ErrorCode::insufficient_data: return "insufficient data";
    case ErrorCode::undefined_skew: return "undefined skew";
    case ErrorCode::unfit_model: return "model not fitted";
    case ErrorCode::undefined_score: return "undefined score";
    case ErrorCode::insufficient_history: return "insufficient history";
    case ErrorCode::insufficient_samples: return "insufficient samples";
    case ErrorCode::invalid_target: return "invalid target";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::io_error: return "i/o error";
    case ErrorCode::provider_unavailable: return "metrics provider unavailable";
    case ErrorCode::executor_failed: return "scaling executor failed";
    case ErrorCode::controller_failed: return "controller failed";
    case ErrorCode::internal: return "internal error";
  }
  return "unknown error";
}

}  // namespace daedalus
