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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"

namespace stochorder {
namespace {

using ::stochorder::testing::binomial_loglik;
using ::stochorder::testing::brute_force_projection;
using ::stochorder::testing::one_sample_local_by_search;
using ::stochorder::testing::one_sample_Tn_by_quadrature;

const DistributionSpec kUnit = DistributionSpec::parse("uniform:a=0,b=1");

TEST(OneSampleLocalTest, ZeroWhenFhatAboveF0) {
  EXPECT_EQ(local_neg2logR_one(0.7, 0.5, 10), 0.0);
  EXPECT_EQ(local_neg2logR_one(0.5, 0.5, 10), 0.0);
}

TEST(OneSampleLocalTest, FrozenValue) {
  // 8 [0.25 log 0.5 + 0.75 log 1.5]
  EXPECT_NEAR(local_neg2logR_one(0.25, 0.5, 4), 1.0464962875290957, 1e-13);
}

TEST(OneSampleLocalTest, EndpointsOfPhat) {
  EXPECT_NEAR(local_neg2logR_one(0.0, 0.3, 5), -10 * std::log(0.7), 1e-13);
  EXPECT_EQ(local_neg2logR_one(1.0, 0.3, 5), 0.0);
}

TEST(OneSampleLocalTest, RejectsDegenerateF0) {
  EXPECT_THROW(local_neg2logR_one(0.2, 0.0, 5), std::domain_error);
  EXPECT_THROW(local_neg2logR_one(0.2, 1.0, 5), std::domain_error);
}

TEST(OneSampleLocalTest, MatchesLikelihoodSearch) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng), f0 = u(rng);
    EXPECT_NEAR(local_neg2logR_one(p, f0, 25),
                one_sample_local_by_search(p, f0, 25), 1e-7);
  }
}

TEST(OneSampleTnTest, FrozenTwoPointValue) {
  const Sample s({0.25, 0.75});
  EXPECT_NEAR(one_sample_Tn(s, kUnit), 0.045228747557780766, 1e-12);
}

TEST(OneSampleTnTest, MatchesQuadrature) {
  std::mt19937_64 rng(8);
  const DistributionSpec expo = DistributionSpec::parse("exponential:rate=1");
  std::exponential_distribution<double> e(0.7);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> v(5 + i);
    for (double& x : v) x = e(rng);
    const Sample s(v);
    const double want = one_sample_Tn_by_quadrature(
        s.values(), [&](double x) { return expo.cdf(x); });
    EXPECT_NEAR(one_sample_Tn(s, expo), want, 1e-8 * std::max(1.0, want));
  }
}

TEST(OneSampleTnTest, SingleObservationIsZero) {
  EXPECT_EQ(one_sample_Tn(Sample({0.4}), kUnit), 0.0);
}

TEST(OneSampleTnTest, CustomF0) {
  const F0Spec f0 = F0Spec::custom([](double x) { return x; }, "identity");
  const Sample s({0.1, 0.2, 0.6});
  EXPECT_DOUBLE_EQ(one_sample_Tn(s, f0), one_sample_Tn(s, kUnit));
  EXPECT_EQ(f0.name(), "identity");
}

TEST(OneSampleTnStarTest, FrozenValues) {
  const Sample s({0.25, 0.75});
  // Right-continuous: Fhat = 0.5, 1 never falls below F0 = 0.25, 0.75.
  EXPECT_EQ(one_sample_Tn_star(s, kUnit), 0.0);
  EXPECT_NEAR(one_sample_Tn_star(s, kUnit, EcdfConvention::kLeftLimit),
              0.5 * (local_neg2logR_one(0.0, 0.25, 2) +
                     local_neg2logR_one(0.5, 0.75, 2)),
              1e-15);
}

TEST(KSampleLocalTest, FrozenTwoGroupValue) {
  // Ecdf values rising with the group index agree with the order.
  KSampleLocalInput in{{0.6, 0.4}, {0.5, 0.5}, {10, 10}};
  EXPECT_EQ(local_neg2logR_k(in, OrderSpec::simple(2)), 0.0);
  in.phat = {0.4, 0.6};
  // 2 * 10 * 2 * [0.6 log 1.2 + 0.4 log 0.8]
  EXPECT_NEAR(local_neg2logR_k(in, OrderSpec::simple(2)), 0.8054205420275545, 1e-12);
}

TEST(KSampleLocalTest, ZeroAtPooledBoundary) {
  KSampleLocalInput in{{0, 0, 0}, {0.3, 0.3, 0.4}, {3, 3, 4}};
  EXPECT_EQ(local_neg2logR_k(in, OrderSpec::simple(3)), 0.0);
  in.phat = {1, 1, 1};
  EXPECT_EQ(local_neg2logR_k(in, OrderSpec::simple(3)), 0.0);
}

// The local statistic is twice the gap between the maximal binomial
// log-likelihood over the cone and over the constant line.
TEST(KSampleLocalTest, MatchesLikelihoodRatio) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 4;
    KSampleLocalInput in;
    std::size_t n = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t nj = 3 + rng() % 12;
      in.sizes.push_back(nj);
      in.phat.push_back(static_cast<double>(rng() % (nj + 1)) / nj);
      n += nj;
    }
    double pooled = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      in.weights.push_back(static_cast<double>(in.sizes[j]) / n);
      pooled += in.weights[j] * in.phat[j];
    }
    const OrderSpec order =
        trial % 3 == 0 ? OrderSpec::tree(k, 0) : OrderSpec::simple(k);
    const double got = local_neg2logR_k(in, order);
    if (pooled <= 1e-12 || pooled >= 1 - 1e-12) {
      EXPECT_EQ(got, 0.0);
      continue;
    }
    std::vector<double> sizes_d(in.sizes.begin(), in.sizes.end());
    const auto fit = brute_force_projection(in.phat, sizes_d, order);
    bool degenerate = false;
    for (double f : fit) degenerate |= f <= 0.0 || f >= 1.0;
    if (degenerate) continue;
    const std::vector<double> flat(k, pooled);
    const double want = 2 * (binomial_loglik(in.phat, in.sizes, fit) -
                             binomial_loglik(in.phat, in.sizes, flat));
    EXPECT_NEAR(got, std::max(0.0, want), 1e-9);
  }
}

TEST(KSampleTnTest, FrozenExample) {
  const GroupedSamples data({Sample({3, 4}), Sample({1, 2})});
  EXPECT_NEAR(k_sample_Tn(data, OrderSpec::simple(2)), 2.249340578475233, 1e-12);
}

TEST(KSampleTnTest, InteriorPointsSkipDegenerateEcdfs) {
  // Every pooled point has some group ecdf at 0 or 1.
  const GroupedSamples sep({Sample({3, 4}), Sample({1, 2})});
  EXPECT_EQ(k_sample_Tn(sep, OrderSpec::simple(2), PooledPoints::kInterior),
            0.0);
  // Only x = 2, 3, 4 survive here.
  const GroupedSamples two({Sample({2, 4, 6, 7}), Sample({1, 3, 5})});
  EXPECT_NEAR(k_sample_Tn(two, OrderSpec::simple(2)), 1.070499132169976, 1e-12);
  EXPECT_NEAR(k_sample_Tn(two, OrderSpec::simple(2), PooledPoints::kInterior),
              0.21391519773138332, 1e-12);
  const GroupedSamples three(
      {Sample({5, 6, 9}), Sample({2, 4, 8}), Sample({1, 3, 7})});
  EXPECT_NEAR(k_sample_Tn(three, OrderSpec::simple(3)), 2.018571697359954,
              1e-12);
  EXPECT_NEAR(
      k_sample_Tn(three, OrderSpec::simple(3), PooledPoints::kInterior),
      0.10089481660502109, 1e-12);
}

TEST(KSampleTnTest, PooledPointsNames) {
  for (auto p : {PooledPoints::kAll, PooledPoints::kInterior}) {
    EXPECT_EQ(parse_pooled_points(to_string(p)), p);
  }
  EXPECT_THROW(parse_pooled_points("edges"), std::invalid_argument);
}

TEST(KSampleTnTest, ZeroWhenOrderHolds) {
  const GroupedSamples data({Sample({1, 2}), Sample({3, 4})});
  EXPECT_EQ(k_sample_Tn(data, OrderSpec::simple(2)), 0.0);
}

TEST(KSampleTnTest, RankInvariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Sample> raw, logged, affine;
    for (int j = 0; j < 3; ++j) {
      std::vector<double> v(10 + trial), e, a;
      for (double& x : v) {
        x = z(rng) + 0.3 * j;
        e.push_back(std::exp(x));
        a.push_back(3 * x + 7);
      }
      raw.emplace_back(v);
      logged.emplace_back(e);
      affine.emplace_back(a);
    }
    const OrderSpec o = OrderSpec::simple(3);
    const double t = k_sample_Tn(GroupedSamples(raw), o);
    EXPECT_NEAR(k_sample_Tn(GroupedSamples(logged), o), t, 1e-12);
    EXPECT_NEAR(k_sample_Tn(GroupedSamples(affine), o), t, 1e-12);
  }
}

TEST(KSampleStatisticTest, AgreesWithFreeFunctionUnderTies) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 4;
    std::vector<Sample> groups;
    std::vector<std::size_t> sizes;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> v(2 + rng() % 15);
      for (double& x : v) x = static_cast<double>(rng() % 8);
      sizes.push_back(v.size());
      groups.emplace_back(v);
    }
    const GroupedSamples data(groups);
    const OrderSpec o =
        trial % 2 ? OrderSpec::umbrella(k, k / 2) : OrderSpec::simple(k);
    KSampleStatistic stat(o, sizes);
    EXPECT_NEAR(stat(data), k_sample_Tn(data, o), 1e-12);
  }
}

TEST(KSampleStatisticTest, RejectsMismatchedSizes) {
  const std::vector<std::size_t> sizes{2, 2};
  KSampleStatistic stat(OrderSpec::simple(2), sizes);
  EXPECT_THROW(stat(GroupedSamples({Sample({1, 2, 3}), Sample({1, 2})})),
               std::invalid_argument);
}

}  // namespace
}  // namespace stochorder
