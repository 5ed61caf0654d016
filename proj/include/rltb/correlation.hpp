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

#include <span>
#include <string>
#include <vector>

namespace rltb {

/// Sample Pearson correlation coefficient. Throws DomainError for mismatched
/// or too-short inputs and DegenerateInput when either series is constant.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

struct CorrelationRow {
  std::string agent_label;
  double fail_frequency = 0.0;
  double mean_return = 0.0;
};

/// Correlation between fail-verdict frequency and mean accumulated reward
/// across agents. Needs at least two rows with frequencies in [0, 1].
double fail_return_correlation(std::span<const CorrelationRow> rows);

}  // namespace rltb
