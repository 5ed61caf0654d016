// Copyright 2026 The rltb Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rltb {

enum class ErrorCode {
  InvalidAction,
  IndexOutOfRange,
  ConfigInvalid,
  DomainError,
  EnvironmentState,
  SearchExhausted,
  SnapshotUnsupported,
  EmptySuite,
  EmptyReference,
  TooShort,
  EmptyTraceSet,
  RetryBudgetExceeded,
  DegenerateInput,
  MissingArtifact,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries a code so that front ends
// (CLI exit status, Python exception mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rltb
