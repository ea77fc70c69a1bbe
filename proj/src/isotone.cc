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

#include "stochorder/isotone.h"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "text_util.h"

namespace stochorder {
namespace {

constexpr std::size_t kMaxLowerSetDimension = 20;

void check_weights(std::span<const double> weights) {
  for (double w : weights) {
    if (!(w > 0) || !std::isfinite(w)) {
      throw std::invalid_argument("projection weights must be positive");
    }
  }
}

std::size_t parse_index(std::string_view text, std::size_t k) {
  const auto v = internal::parse_int<std::size_t>(text);
  if (!v || *v < 1 || *v > k) {
    throw std::invalid_argument("order index '" + std::string(text) +
                                "' is not in 1.." + std::to_string(k));
  }
  return *v - 1;
}

}  // namespace

OrderSpec::OrderSpec(Kind kind, std::size_t k, std::size_t anchor,
                     std::vector<Pair> constraints)
    : kind_(kind), k_(k), anchor_(anchor), constraints_(std::move(constraints)) {
  if (k_ == 0) throw std::invalid_argument("order dimension must be positive");
  closure_.assign(k_ * k_, false);
  for (std::size_t i = 0; i < k_; ++i) closure_[i * k_ + i] = true;
  for (const auto& [i, j] : constraints_) {
    if (i >= k_ || j >= k_) {
      throw std::invalid_argument("order relation index out of range");
    }
    closure_[i * k_ + j] = true;
  }
  for (std::size_t m = 0; m < k_; ++m) {
    for (std::size_t i = 0; i < k_; ++i) {
      if (!closure_[i * k_ + m]) continue;
      for (std::size_t j = 0; j < k_; ++j) {
        if (closure_[m * k_ + j]) closure_[i * k_ + j] = true;
      }
    }
  }
}

OrderSpec OrderSpec::simple(std::size_t k) {
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i + 1 < k; ++i) pairs.emplace_back(i, i + 1);
  return OrderSpec(Kind::kSimple, k, 0, std::move(pairs));
}

OrderSpec OrderSpec::tree(std::size_t k, std::size_t root) {
  if (root >= k) throw std::invalid_argument("tree root out of range");
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != root) pairs.emplace_back(root, i);
  }
  return OrderSpec(Kind::kTree, k, root, std::move(pairs));
}

OrderSpec OrderSpec::umbrella(std::size_t k, std::size_t peak) {
  if (peak >= k) throw std::invalid_argument("umbrella peak out of range");
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < peak; ++i) pairs.emplace_back(i, i + 1);
  for (std::size_t i = peak; i + 1 < k; ++i) pairs.emplace_back(i + 1, i);
  return OrderSpec(Kind::kUmbrella, k, peak, std::move(pairs));
}

OrderSpec OrderSpec::general(std::size_t k, std::vector<Pair> relation) {
  return OrderSpec(Kind::kGeneral, k, 0, std::move(relation));
}

bool OrderSpec::is_feasible(std::span<const double> z,
                            double tolerance) const {
  if (z.size() != k_) return false;
  for (std::size_t i = 0; i < k_; ++i) {
    for (std::size_t j = 0; j < k_; ++j) {
      if (precedes(i, j) && z[i] > z[j] + tolerance) return false;
    }
  }
  return true;
}

std::string OrderSpec::to_string() const {
  switch (kind_) {
    case Kind::kSimple:
      return "simple";
    case Kind::kTree:
      return "tree:root=" + std::to_string(anchor_ + 1);
    case Kind::kUmbrella:
      return "umbrella:peak=" + std::to_string(anchor_ + 1);
    case Kind::kGeneral:
      break;
  }
  std::string out = "general:";
  for (std::size_t p = 0; p < constraints_.size(); ++p) {
    if (p > 0) out += ',';
    out += std::to_string(constraints_[p].first + 1) + "<=" +
           std::to_string(constraints_[p].second + 1);
  }
  return out;
}

OrderSpec OrderSpec::parse(std::string_view text, std::size_t k) {
  text = internal::trim(text);
  const std::size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{}
                                      : text.substr(colon + 1);
  const auto keyed = [&](std::string_view key) {
    const std::string prefix = std::string(key) + "=";
    if (rest.substr(0, prefix.size()) != prefix) {
      throw std::invalid_argument("order '" + std::string(name) +
                                  "' requires '" + prefix + "<index>'");
    }
    return parse_index(rest.substr(prefix.size()), k);
  };
  if (name == "simple") {
    if (!rest.empty()) throw std::invalid_argument("'simple' takes no options");
    return simple(k);
  }
  if (name == "tree") return tree(k, keyed("root"));
  if (name == "umbrella") return umbrella(k, keyed("peak"));
  if (name == "general") {
    std::vector<Pair> pairs;
    for (std::string_view item : internal::split(rest, ',')) {
      item = internal::trim(item);
      if (item.empty()) continue;
      std::size_t pos = item.find("<=");
      std::size_t len = 2;
      if (pos == std::string_view::npos) {
        pos = item.find('<');
        len = 1;
      }
      if (pos == std::string_view::npos) {
        throw std::invalid_argument("relation item '" + std::string(item) +
                                    "' must look like 'i<=j'");
      }
      pairs.emplace_back(parse_index(item.substr(0, pos), k),
                         parse_index(item.substr(pos + len), k));
    }
    return general(k, std::move(pairs));
  }
  throw std::invalid_argument("unknown order kind '" + std::string(name) + "'");
}

IsotonicProjector::IsotonicProjector(const OrderSpec& order,
                                     std::span<const double> weights)
    : chain_(order.kind() == OrderSpec::Kind::kSimple),
      weights_(weights.begin(), weights.end()) {
  const std::size_t k = order.k();
  if (weights_.size() != k) {
    throw std::invalid_argument("weights and order have different dimensions");
  }
  check_weights(weights_);
  block_weight_.resize(k);
  block_sum_.resize(k);
  block_end_.resize(k);
  if (chain_) return;
  if (k > kMaxLowerSetDimension) {
    throw std::invalid_argument(
        "non-chain orders support at most 20 components");
  }
  std::vector<std::uint32_t> predecessors(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (order.precedes(i, j)) predecessors[j] |= std::uint32_t{1} << i;
    }
  }
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    bool lower = true;
    for (std::size_t j = 0; j < k && lower; ++j) {
      if ((mask >> j & 1u) && (predecessors[j] & ~mask)) lower = false;
    }
    if (lower) lower_sets_.push_back(mask);
  }
}

void IsotonicProjector::project(std::span<const double> values,
                                std::span<double> fitted) {
  run(values, fitted, nullptr);
}

Projection IsotonicProjector::project_with_blocks(
    std::span<const double> values) {
  Projection out;
  out.fitted.resize(k());
  run(values, out.fitted, &out.blocks);
  return out;
}

void IsotonicProjector::run(std::span<const double> values,
                            std::span<double> fitted,
                            std::vector<std::vector<std::size_t>>* blocks) {
  if (values.size() != k() || fitted.size() != k()) {
    throw std::invalid_argument("projection input has the wrong dimension");
  }
  if (blocks) blocks->clear();
  if (chain_) {
    run_pava(values, fitted, blocks);
  } else {
    run_lower_sets(values, fitted, blocks);
  }
}

void IsotonicProjector::run_pava(
    std::span<const double> values, std::span<double> fitted,
    std::vector<std::vector<std::size_t>>* blocks) {
  const std::size_t k = values.size();
  std::size_t top = 0;
  for (std::size_t i = 0; i < k; ++i) {
    block_weight_[top] = weights_[i];
    block_sum_[top] = weights_[i] * values[i];
    block_end_[top] = i + 1;
    ++top;
    while (top > 1 && block_sum_[top - 2] / block_weight_[top - 2] >
                          block_sum_[top - 1] / block_weight_[top - 1]) {
      block_weight_[top - 2] += block_weight_[top - 1];
      block_sum_[top - 2] += block_sum_[top - 1];
      block_end_[top - 2] = block_end_[top - 1];
      --top;
    }
  }
  std::size_t start = 0;
  for (std::size_t b = 0; b < top; ++b) {
    const double level = block_sum_[b] / block_weight_[b];
    for (std::size_t i = start; i < block_end_[b]; ++i) fitted[i] = level;
    if (blocks) {
      auto& members = blocks->emplace_back();
      for (std::size_t i = start; i < block_end_[b]; ++i) members.push_back(i);
    }
    start = block_end_[b];
  }
}

// Minimum lower sets: repeatedly take the largest lower set (of what remains)
// with the smallest weighted average; its members form the next level set.
void IsotonicProjector::run_lower_sets(
    std::span<const double> values, std::span<double> fitted,
    std::vector<std::vector<std::size_t>>* blocks) {
  const std::size_t k = values.size();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  std::uint32_t removed = 0;
  while (removed != full) {
    std::uint32_t best_set = 0;
    double best_avg = 0.0;
    for (std::uint32_t lower : lower_sets_) {
      if ((lower & removed) != removed || lower == removed) continue;
      const std::uint32_t candidate = lower & ~removed;
      double sw = 0.0, swv = 0.0;
      for (std::uint32_t bits = candidate; bits; bits &= bits - 1) {
        const int i = std::countr_zero(bits);
        sw += weights_[i];
        swv += weights_[i] * values[i];
      }
      const double avg = swv / sw;
      if (best_set == 0) {
        best_set = candidate;
        best_avg = avg;
        continue;
      }
      const double tol = 1e-13 * (1.0 + std::abs(best_avg));
      if (avg < best_avg - tol) {
        best_set = candidate;
        best_avg = avg;
      } else if (avg <= best_avg + tol &&
                 std::popcount(candidate) > std::popcount(best_set)) {
        best_set = candidate;
        best_avg = avg;
      }
    }
    std::vector<std::size_t>* members = blocks ? &blocks->emplace_back()
                                               : nullptr;
    for (std::uint32_t bits = best_set; bits; bits &= bits - 1) {
      const int i = std::countr_zero(bits);
      fitted[i] = best_avg;
      if (members) members->push_back(static_cast<std::size_t>(i));
    }
    removed |= best_set;
  }
}

Projection pava(std::span<const double> values,
                std::span<const double> weights) {
  if (values.empty()) {
    throw std::invalid_argument("projection input must be nonempty");
  }
  if (values.size() != weights.size()) {
    throw std::invalid_argument("values and weights differ in length");
  }
  IsotonicProjector projector(OrderSpec::simple(values.size()), weights);
  return projector.project_with_blocks(values);
}

Projection project_cone(std::span<const double> values,
                        std::span<const double> weights,
                        const OrderSpec& order) {
  if (values.size() != order.k() || weights.size() != order.k()) {
    throw std::invalid_argument(
        "values, weights and order have inconsistent dimensions");
  }
  if (order.kind() == OrderSpec::Kind::kSimple) return pava(values, weights);
  IsotonicProjector projector(order, weights);
  return projector.project_with_blocks(values);
}

}  // namespace stochorder
