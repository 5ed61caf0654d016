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

#include "rltb/error.hpp"

namespace rltb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EnvironmentState: return "EnvironmentState";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::SnapshotUnsupported: return "SnapshotUnsupported";
    case ErrorCode::EmptySuite: return "EmptySuite";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptyTraceSet: return "EmptyTraceSet";
    case ErrorCode::RetryBudgetExceeded: return "RetryBudgetExceeded";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace rltb
