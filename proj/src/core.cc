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

#include "stochorder/core.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stochorder {

Sample::Sample(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label)) {
  if (values_.empty()) {
    throw std::invalid_argument("sample '" + label_ + "' is empty");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("sample '" + label_ +
                                  "' contains a non-finite value");
    }
  }
  std::sort(values_.begin(), values_.end());
}

double ecdf_eval(const Sample& sample, double x) {
  const auto values = sample.values();
  const auto count = std::upper_bound(values.begin(), values.end(), x) -
                     values.begin();
  return static_cast<double>(count) / static_cast<double>(values.size());
}

GroupedSamples::GroupedSamples(std::vector<Sample> groups)
    : groups_(std::move(groups)) {
  if (groups_.size() < 2) {
    throw std::invalid_argument("at least two groups are required");
  }
  for (const auto& g : groups_) total_ += g.size();
  weights_.reserve(groups_.size());
  for (const auto& g : groups_) {
    weights_.push_back(static_cast<double>(g.size()) /
                       static_cast<double>(total_));
  }
}

std::vector<std::size_t> GroupedSamples::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(groups_.size());
  for (const auto& g : groups_) out.push_back(g.size());
  return out;
}

PooledGrid build_pooled_grid(const GroupedSamples& data) {
  const std::size_t k = data.k();
  const double n = static_cast<double>(data.n());
  PooledGrid grid;
  grid.k_ = k;

  std::vector<std::size_t> head(k, 0);
  std::vector<std::size_t> counts(k, 0);
  std::size_t pooled_count = 0;
  while (pooled_count < data.n()) {
    double x = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const auto v = data.group(j).values();
      if (head[j] < v.size()) x = std::min(x, v[head[j]]);
    }
    std::size_t mult = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto v = data.group(j).values();
      while (head[j] < v.size() && v[head[j]] == x) {
        ++head[j];
        ++mult;
      }
      counts[j] = head[j];
    }
    pooled_count += mult;
    grid.points_.push_back(x);
    grid.multiplicities_.push_back(mult);
    if (mult > 1) ++grid.tie_count_;
    for (std::size_t j = 0; j < k; ++j) {
      grid.group_cdf_.push_back(static_cast<double>(counts[j]) /
                                static_cast<double>(data.group(j).size()));
    }
    grid.pooled_.push_back(static_cast<double>(pooled_count) / n);
  }
  return grid;
}

}  // namespace stochorder
