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

#include "rltb/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "rltb/error.hpp"

namespace rltb {

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::DomainError, "series lengths differ");
  if (xs.size() < 2) throw Error(ErrorCode::DomainError, "correlation needs at least two points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateInput, "a series has zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double fail_return_correlation(std::span<const CorrelationRow> rows) {
  if (rows.size() < 2) throw Error(ErrorCode::DomainError, "correlation needs at least two agents");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : rows) {
    if (!(r.fail_frequency >= 0.0 && r.fail_frequency <= 1.0)) {
      throw Error(ErrorCode::DomainError, "fail frequency of " + r.agent_label + " lies outside [0, 1]");
    }
    xs.push_back(r.fail_frequency);
    ys.push_back(r.mean_return);
  }
  return pearson_correlation(xs, ys);
}

}  // namespace rltb
