// Copyright 2026 The stochorder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stochorder/competitor.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochorder {

SnResult sn_statistic(const GroupedSamples& data) {
  const PooledGrid grid = build_pooled_grid(data);
  const std::size_t k = data.k();
  SnResult result;
  double pooled_size = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const double nj = static_cast<double>(data.group(j).size());
    const double next = static_cast<double>(data.group(j + 1).size());
    pooled_size += nj;
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // Pooled ecdf of groups 0..j from their counts.
      double count = 0.0;
      for (std::size_t l = 0; l <= j; ++l) {
        count += grid.group_cdf(i, l) *
                 static_cast<double>(data.group(l).size());
      }
      sup = std::max(sup, grid.group_cdf(i, j + 1) - count / pooled_size);
    }
    const double scale =
        std::sqrt(pooled_size * next / (pooled_size + next));
    result.per_stage.push_back(scale * sup);
  }
  result.statistic =
      *std::max_element(result.per_stage.begin(), result.per_stage.end());
  return result;
}

double sn_critical(double alpha, std::size_t k) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  const double stage = std::pow(1.0 - alpha, 1.0 / static_cast<double>(k - 1));
  return std::sqrt(-std::log1p(-stage) / 2.0);
}

double sn_p_value(double statistic, std::size_t k) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (statistic <= 0.0) return 1.0;
  const double stage = -std::expm1(-2.0 * statistic * statistic);
  return 1.0 - std::pow(stage, static_cast<double>(k - 1));
}

}  // namespace stochorder
