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

// Power-study harness: rejection rates of T_n and S_n at fixed critical
// values over simulated data sets.

#ifndef STOCHORDER_POWER_H_
#define STOCHORDER_POWER_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stochorder/core.h"
#include "stochorder/distribution.h"
#include "stochorder/elstat.h"
#include "stochorder/isotone.h"

namespace stochorder {

// n iid draws. `source` provides uniform() on (0, 1) and gaussian();
// RandomStream qualifies, and tests substitute fixed sources.
template <typename Source>
std::vector<double> sample_values(const DistributionSpec& spec, std::size_t n,
                                  Source& source) {
  std::vector<double> out(n);
  const auto& family = spec.family();
  for (double& v : out) {
    if (const auto* u = std::get_if<Uniform>(&family)) {
      v = u->a + (u->b - u->a) * source.uniform();
    } else if (const auto* e = std::get_if<Exponential>(&family)) {
      v = -std::log1p(-source.uniform()) / e->rate;
    } else if (const auto* s = std::get_if<ShiftedExponential>(&family)) {
      v = s->shift - std::log1p(-source.uniform()) / s->rate;
    } else {
      const auto& g = std::get<Normal>(family);
      v = g.mean + std::sqrt(g.variance) * source.gaussian();
    }
  }
  return out;
}

template <typename Source>
Sample sample_distribution(const DistributionSpec& spec, std::size_t n,
                           Source& source, std::string label = "") {
  return Sample(sample_values(spec, n, source), std::move(label));
}

struct Scenario {
  std::string name;
  std::vector<std::size_t> n_vec;
  std::vector<DistributionSpec> distributions;
  std::size_t reps = 10000;
  double alpha = 0.05;
  std::optional<OrderSpec> order;  // simple chain when unset
  bool run_tn = true;
  bool run_sn = true;
  PooledPoints points = PooledPoints::kAll;  // pooled points entering T_n
  std::uint64_t seed = 1;

  std::size_t k() const { return n_vec.size(); }
  // Throws std::invalid_argument when the fields are inconsistent.
  void validate() const;
};

struct TestRate {
  std::size_t rejections = 0;
  std::size_t reps = 0;
  double critical_value = 0.0;

  double rate() const {
    return static_cast<double>(rejections) / static_cast<double>(reps);
  }
  double standard_error() const {
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  }
};

struct PowerResult {
  std::optional<TestRate> tn;
  std::optional<TestRate> sn;
  std::uint64_t seed = 0;
};

// A test rejects when its statistic strictly exceeds its critical value.
PowerResult run_power(const Scenario& scenario, double crit_tn, double crit_sn,
                      int workers = 0);

}  // namespace stochorder

#endif  // STOCHORDER_POWER_H_
