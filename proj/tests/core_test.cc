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
#include <random>
#include <stdexcept>

#include "gtest/gtest.h"

namespace stochorder {
namespace {

TEST(SampleTest, SortsOnConstruction) {
  const Sample s({3.0, 1.0, 2.0}, "a");
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(std::is_sorted(s.values().begin(), s.values().end()));
  EXPECT_EQ(s.label(), "a");
}

TEST(SampleTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Sample({}), std::invalid_argument);
  EXPECT_THROW(Sample({1.0, std::numeric_limits<double>::quiet_NaN()}),
               std::invalid_argument);
  EXPECT_THROW(Sample({std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(EcdfTest, Examples) {
  const Sample s({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(ecdf_eval(s, 2.0), 2.0 / 3.0);
  EXPECT_EQ(ecdf_eval(s, 0.5), 0.0);
  EXPECT_EQ(ecdf_eval(s, 3.0), 1.0);
  EXPECT_EQ(ecdf_eval(s, 1e300), 1.0);
}

TEST(EcdfTest, NondecreasingAndRightContinuous) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  std::vector<double> v(50);
  for (double& x : v) x = z(rng);
  const Sample s(v);
  double prev = 0.0;
  for (double x = -4; x <= 4; x += 0.01) {
    const double f = ecdf_eval(s, x);
    EXPECT_GE(f, prev);
    prev = f;
  }
  for (double x : s.values()) {
    EXPECT_GT(ecdf_eval(s, x), ecdf_eval(s, std::nextafter(x, -1e9)));
  }
}

TEST(GroupedSamplesTest, WeightsSumToOne) {
  const GroupedSamples g({Sample({1, 2, 3}), Sample({4}), Sample({5, 6, 7})});
  EXPECT_EQ(g.k(), 3u);
  EXPECT_EQ(g.n(), 7u);
  double sum = 0;
  for (double w : g.weights()) {
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, 1.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(GroupedSamplesTest, RequiresTwoGroups) {
  EXPECT_THROW(GroupedSamples({Sample({1.0})}), std::invalid_argument);
}

TEST(PooledGridTest, MergeWithTie) {
  const PooledGrid g =
      build_pooled_grid(GroupedSamples({Sample({1, 2}), Sample({1, 3})}));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(std::vector<double>(g.points().begin(), g.points().end()),
            (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(std::vector<std::size_t>(g.multiplicities().begin(),
                                     g.multiplicities().end()),
            (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_EQ(g.tie_count(), 1u);
}

TEST(PooledGridTest, GroupEcdfs) {
  const PooledGrid g =
      build_pooled_grid(GroupedSamples({Sample({3, 4}), Sample({1, 2})}));
  ASSERT_EQ(g.size(), 4u);
  const double phi1[] = {0, 0, 0.5, 1};
  const double phi2[] = {0.5, 1, 1, 1};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(g.group_cdf(i, 0), phi1[i]);
    EXPECT_EQ(g.group_cdf(i, 1), phi2[i]);
  }
  EXPECT_EQ(g.tie_count(), 0u);
}

TEST(PooledGridTest, SingleRepeatedValue) {
  const PooledGrid g =
      build_pooled_grid(GroupedSamples({Sample({5, 5}), Sample({5})}));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.pooled_cdf()[0], 1.0);
  EXPECT_EQ(g.multiplicities()[0], 3u);
}

// Random grouped data with ties: pooled identity, monotone columns, final
// row of ones, multiplicities summing to n, and invariance to shuffling.
TEST(PooledGridTest, InvariantsOnRandomData) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> level(0, 20);
  std::uniform_int_distribution<int> size(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 4;
    std::vector<std::vector<double>> raw(k);
    std::vector<Sample> groups;
    for (auto& g : raw) {
      g.resize(size(rng));
      for (double& x : g) x = level(rng) * 0.5;
      groups.emplace_back(g);
    }
    const GroupedSamples data(groups);
    const PooledGrid grid = build_pooled_grid(data);
    std::size_t total = 0;
    for (auto m : grid.multiplicities()) total += m;
    EXPECT_EQ(total, data.n());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double mix = 0.0;
      for (int j = 0; j < k; ++j) {
        mix += data.weights()[j] * grid.group_cdf(i, j);
        if (i > 0) EXPECT_GE(grid.group_cdf(i, j), grid.group_cdf(i - 1, j));
      }
      EXPECT_NEAR(grid.pooled_cdf()[i], mix, 1e-12);
    }
    for (int j = 0; j < k; ++j) EXPECT_EQ(grid.group_cdf(grid.size() - 1, j), 1.0);

    std::vector<Sample> shuffled;
    for (auto g : raw) {
      std::shuffle(g.begin(), g.end(), rng);
      shuffled.emplace_back(g);
    }
    const PooledGrid again = build_pooled_grid(GroupedSamples(shuffled));
    ASSERT_EQ(again.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_EQ(again.points()[i], grid.points()[i]);
      for (int j = 0; j < k; ++j) {
        EXPECT_EQ(again.group_cdf(i, j), grid.group_cdf(i, j));
      }
    }
  }
}

}  // namespace
}  // namespace stochorder
