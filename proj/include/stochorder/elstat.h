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

// Empirical likelihood statistics for stochastic ordering.
//
// The local statistic -2 log R(x) compares the binomial likelihood of the
// ecdf value(s) at x under equality against the order-restricted maximum.
// Integrating it over x gives T_n:
//
//   one sample, H1: F > F0      T_n  = -2 int log R dF0   (exact, closed form)
//                               T_n* = -2 int log R dFhat
//   k samples, H1: F_1 > ... > F_k
//                               T_n  = -2 int log R dFhat (pooled ecdf)
//
// "F > G" is stochastic ordering, F(x) <= G(x) for all x. Terms of the
// form 0 * log(.) are skipped, which is the usual convention that a factor
// raised to the power zero equals one.

#ifndef STOCHORDER_ELSTAT_H_
#define STOCHORDER_ELSTAT_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stochorder/core.h"
#include "stochorder/distribution.h"
#include "stochorder/isotone.h"

namespace stochorder {

// Hypothesized cdf for the one-sample test: one of the built-in families, or
// a user-supplied evaluator that must be continuous and strictly increasing
// wherever it lies strictly between 0 and 1.
class F0Spec {
 public:
  F0Spec(DistributionSpec distribution);  // NOLINT: implicit by intent
  static F0Spec custom(std::function<double(double)> cdf, std::string name);

  double cdf(double x) const { return cdf_(x); }
  const std::string& name() const { return name_; }

 private:
  F0Spec(std::function<double(double)> cdf, std::string name)
      : cdf_(std::move(cdf)), name_(std::move(name)) {}

  std::function<double(double)> cdf_;
  std::string name_;
};

// -2 log R(x) for one sample: zero when phat > f0, otherwise
// 2n [phat log(phat/f0) + (1-phat) log((1-phat)/(1-f0))].
// Throws std::domain_error unless 0 < f0 < 1.
double local_neg2logR_one(double phat, double f0, std::size_t n);

// Exact T_n over [X_(1), X_(n)]. Below X_(1) the local statistic would be
// n log(1/(1-F0)) rather than zero; that range is excluded on purpose.
double one_sample_Tn(const Sample& sample, const F0Spec& f0);

enum class EcdfConvention {
  kRightContinuous,  // Fhat(X_(i)) = #{X <= X_(i)} / n
  kLeftLimit,        // Fhat(X_(i)-) = #{X < X_(i)} / n
};

// T_n* = (1/n) sum_i local(Fhat(X_(i)), F0(X_(i)), n). Points where
// F0 is 0 or 1 contribute nothing.
double one_sample_Tn_star(
    const Sample& sample, const F0Spec& f0,
    EcdfConvention convention = EcdfConvention::kRightContinuous);

struct KSampleLocalInput {
  std::vector<double> phat;         // per-group ecdf values at x
  std::vector<double> weights;      // n_j / n
  std::vector<std::size_t> sizes;   // n_j
};

// -2 log R(x) for k samples: with Fhat = sum_j w_j phat_j and
// Ftilde = projection of phat onto the order's cone,
// 2 sum_j n_j [phat_j log(Ftilde_j/Fhat) + (1-phat_j) log((1-Ftilde_j)/(1-Fhat))].
double local_neg2logR_k(const KSampleLocalInput& input, const OrderSpec& order);

// Which pooled points enter the k-sample sum.
enum class PooledPoints {
  kAll,       // every pooled observation
  kInterior,  // only points where every group ecdf lies strictly in (0, 1)
};

std::string to_string(PooledPoints points);
// "all" or "interior"; throws std::invalid_argument otherwise.
PooledPoints parse_pooled_points(std::string_view name);

// T_n = sum over distinct pooled points of (multiplicity / n) * local value.
double k_sample_Tn(const GroupedSamples& data, const OrderSpec& order,
                   PooledPoints points = PooledPoints::kAll);

// Reusable evaluator of the k-sample T_n for fixed group sizes; used by the
// Monte Carlo loops. Not thread-safe; one instance per worker.
class KSampleStatistic {
 public:
  KSampleStatistic(const OrderSpec& order, std::span<const std::size_t> sizes,
                   PooledPoints points = PooledPoints::kAll);

  // Each span must be sorted ascending and have the size given at
  // construction.
  double operator()(std::span<const std::span<const double>> sorted_groups);
  double operator()(const GroupedSamples& data);

 private:
  std::vector<std::size_t> sizes_;
  std::vector<double> weights_;
  std::size_t total_ = 0;
  PooledPoints points_;
  IsotonicProjector projector_;
  std::vector<std::size_t> head_;
  std::vector<double> phat_;
  std::vector<double> fitted_;
  std::vector<std::span<const double>> views_;
};

}  // namespace stochorder

#endif  // STOCHORDER_ELSTAT_H_
