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

#include "stochorder/elstat.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stochorder {
namespace {

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

// Antiderivative in u = F0(x) of the one-sample local statistic on a segment
// where the ecdf equals p (valid for u >= p).
double segment_antiderivative(double u, double p, double n) {
  const double a = u * std::log(u) - u;                          // int log u
  const double c = (u >= 1.0 ? 0.0 : -(1.0 - u) * std::log1p(-u)) - u;  // int log(1-u)
  return 2.0 * n * ((xlogx(p) + xlogx(1.0 - p)) * u - p * a - (1.0 - p) * c);
}

double local_from_fit(std::span<const double> phat,
                      std::span<const double> fitted, double pooled,
                      std::span<const std::size_t> sizes) {
  if (pooled <= 0.0 || pooled >= 1.0) return 0.0;
  // A single level set means the restricted maximizer is the pooled value.
  if (std::all_of(fitted.begin(), fitted.end(),
                  [&](double f) { return f == fitted[0]; })) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < phat.size(); ++j) {
    const double n = static_cast<double>(sizes[j]);
    if (phat[j] > 0.0) sum += n * phat[j] * std::log(fitted[j] / pooled);
    if (phat[j] < 1.0) {
      sum += n * (1.0 - phat[j]) * std::log((1.0 - fitted[j]) / (1.0 - pooled));
    }
  }
  return std::max(0.0, 2.0 * sum);
}

std::vector<double> weights_for(std::span<const std::size_t> sizes) {
  std::size_t total = 0;
  for (auto s : sizes) {
    if (s == 0) throw std::invalid_argument("group sizes must be positive");
    total += s;
  }
  std::vector<double> w;
  w.reserve(sizes.size());
  for (auto s : sizes) {
    w.push_back(static_cast<double>(s) / static_cast<double>(total));
  }
  return w;
}

}  // namespace

F0Spec::F0Spec(DistributionSpec distribution)
    : cdf_([distribution](double x) { return distribution.cdf(x); }),
      name_(distribution.to_string()) {}

F0Spec F0Spec::custom(std::function<double(double)> cdf, std::string name) {
  if (!cdf) throw std::invalid_argument("custom cdf must be callable");
  return F0Spec(std::move(cdf), std::move(name));
}

double local_neg2logR_one(double phat, double f0, std::size_t n) {
  if (!(f0 > 0.0 && f0 < 1.0)) {
    throw std::domain_error("F0(x) must lie strictly between 0 and 1");
  }
  if (phat > f0) return 0.0;
  double sum = 0.0;
  if (phat > 0.0) sum += phat * std::log(phat / f0);
  if (phat < 1.0) sum += (1.0 - phat) * std::log((1.0 - phat) / (1.0 - f0));
  return std::max(0.0, 2.0 * static_cast<double>(n) * sum);
}

double one_sample_Tn(const Sample& sample, const F0Spec& f0) {
  const auto x = sample.values();
  const std::size_t n = x.size();
  const double dn = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] == x[i - 1]) continue;
    const double p = static_cast<double>(i) / dn;
    const double lo = std::max(f0.cdf(x[i - 1]), p);
    const double hi = f0.cdf(x[i]);
    if (hi > lo) {
      total += segment_antiderivative(hi, p, dn) -
               segment_antiderivative(lo, p, dn);
    }
  }
  return std::max(0.0, total);
}

double one_sample_Tn_star(const Sample& sample, const F0Spec& f0,
                          EcdfConvention convention) {
  const auto x = sample.values();
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = f0.cdf(x[i]);
    if (!(u > 0.0 && u < 1.0)) continue;
    const auto count =
        convention == EcdfConvention::kRightContinuous
            ? std::upper_bound(x.begin(), x.end(), x[i]) - x.begin()
            : std::lower_bound(x.begin(), x.end(), x[i]) - x.begin();
    total += local_neg2logR_one(
        static_cast<double>(count) / static_cast<double>(n), u, n);
  }
  return total / static_cast<double>(n);
}

double local_neg2logR_k(const KSampleLocalInput& input,
                        const OrderSpec& order) {
  const std::size_t k = input.phat.size();
  if (input.weights.size() != k || input.sizes.size() != k ||
      order.k() != k) {
    throw std::invalid_argument("local input and order dimensions differ");
  }
  double pooled = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (!(input.phat[j] >= 0.0 && input.phat[j] <= 1.0)) {
      throw std::invalid_argument("ecdf values must lie in [0, 1]");
    }
    pooled += input.weights[j] * input.phat[j];
  }
  const Projection fit = project_cone(input.phat, input.weights, order);
  return local_from_fit(input.phat, fit.fitted, pooled, input.sizes);
}

std::string to_string(PooledPoints points) {
  return points == PooledPoints::kAll ? "all" : "interior";
}

PooledPoints parse_pooled_points(std::string_view name) {
  if (name == "all") return PooledPoints::kAll;
  if (name == "interior") return PooledPoints::kInterior;
  throw std::invalid_argument("unknown pooled-points rule '" +
                              std::string(name) + "' (all | interior)");
}

double k_sample_Tn(const GroupedSamples& data, const OrderSpec& order,
                   PooledPoints points) {
  const auto sizes = data.sizes();
  KSampleStatistic statistic(order, sizes, points);
  return statistic(data);
}

KSampleStatistic::KSampleStatistic(const OrderSpec& order,
                                   std::span<const std::size_t> sizes,
                                   PooledPoints points)
    : sizes_(sizes.begin(), sizes.end()),
      weights_(weights_for(sizes)),
      points_(points),
      projector_(order, weights_),
      head_(sizes.size()),
      phat_(sizes.size()),
      fitted_(sizes.size()),
      views_(sizes.size()) {
  for (auto s : sizes_) total_ += s;
}

double KSampleStatistic::operator()(const GroupedSamples& data) {
  if (data.k() != sizes_.size()) {
    throw std::invalid_argument("group count differs from the evaluator's");
  }
  for (std::size_t j = 0; j < data.k(); ++j) views_[j] = data.group(j).values();
  return (*this)(views_);
}

double KSampleStatistic::operator()(
    std::span<const std::span<const double>> sorted_groups) {
  const std::size_t k = sizes_.size();
  if (sorted_groups.size() != k) {
    throw std::invalid_argument("group count differs from the evaluator's");
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (sorted_groups[j].size() != sizes_[j]) {
      throw std::invalid_argument("group size differs from the evaluator's");
    }
    head_[j] = 0;
  }
  const double n = static_cast<double>(total_);
  std::size_t seen = 0;
  double total = 0.0;
  while (seen < total_) {
    double x = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      if (head_[j] < sizes_[j]) x = std::min(x, sorted_groups[j][head_[j]]);
    }
    std::size_t mult = 0;
    bool interior = true;
    for (std::size_t j = 0; j < k; ++j) {
      const auto g = sorted_groups[j];
      while (head_[j] < sizes_[j] && g[head_[j]] == x) {
        ++head_[j];
        ++mult;
      }
      phat_[j] = static_cast<double>(head_[j]) / static_cast<double>(sizes_[j]);
      interior &= head_[j] > 0 && head_[j] < sizes_[j];
    }
    seen += mult;
    if (seen == total_) break;  // pooled ecdf is 1: local statistic vanishes
    if (points_ == PooledPoints::kInterior && !interior) continue;
    projector_.project(phat_, fitted_);
    const double pooled = static_cast<double>(seen) / n;
    total += static_cast<double>(mult) / n *
             local_from_fit(phat_, fitted_, pooled, sizes_);
  }
  return total;
}

}  // namespace stochorder
