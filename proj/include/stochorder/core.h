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

// Sample containers and the pooled-sample grid shared by every statistic.

#ifndef STOCHORDER_CORE_H_
#define STOCHORDER_CORE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stochorder {

// A nonempty set of finite observations, kept sorted ascending.
class Sample {
 public:
  // Throws std::invalid_argument if `values` is empty or holds a non-finite
  // value.
  explicit Sample(std::vector<double> values, std::string label = "");

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const std::string& label() const { return label_; }

  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

 private:
  std::vector<double> values_;
  std::string label_;
};

// Right-continuous empirical cdf: #{X_i <= x} / n.
double ecdf_eval(const Sample& sample, double x);

// k >= 2 samples in hypothesis order. Group j carries weight n_j / n.
class GroupedSamples {
 public:
  // Throws std::invalid_argument if fewer than two groups are given.
  explicit GroupedSamples(std::vector<Sample> groups);

  std::size_t k() const { return groups_.size(); }
  std::size_t n() const { return total_; }
  const Sample& group(std::size_t j) const { return groups_[j]; }
  std::span<const Sample> groups() const { return groups_; }
  std::span<const double> weights() const { return weights_; }
  std::vector<std::size_t> sizes() const;

 private:
  std::vector<Sample> groups_;
  std::size_t total_ = 0;
  std::vector<double> weights_;
};

// Distinct pooled values with multiplicities, per-group ecdfs and the pooled
// ecdf evaluated at each of them.
class PooledGrid {
 public:
  std::size_t size() const { return points_.size(); }
  std::size_t k() const { return k_; }

  std::span<const double> points() const { return points_; }
  std::span<const std::size_t> multiplicities() const { return multiplicities_; }
  std::span<const double> pooled_cdf() const { return pooled_; }

  // Per-group ecdf values at point i, one entry per group.
  std::span<const double> group_cdfs(std::size_t i) const {
    return {group_cdf_.data() + i * k_, k_};
  }
  double group_cdf(std::size_t i, std::size_t j) const {
    return group_cdf_[i * k_ + j];
  }

  // Number of pooled points shared by more than one observation.
  std::size_t tie_count() const { return tie_count_; }

 private:
  friend PooledGrid build_pooled_grid(const GroupedSamples& data);

  std::size_t k_ = 0;
  std::vector<double> points_;
  std::vector<std::size_t> multiplicities_;
  std::vector<double> group_cdf_;
  std::vector<double> pooled_;
  std::size_t tie_count_ = 0;
};

PooledGrid build_pooled_grid(const GroupedSamples& data);

}  // namespace stochorder

#endif  // STOCHORDER_CORE_H_
