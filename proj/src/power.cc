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

#include "stochorder/power.h"

#include <stdexcept>

#include "stochorder/competitor.h"
#include "stochorder/elstat.h"
#include "stochorder/parallel.h"
#include "stochorder/random.h"

namespace stochorder {

void Scenario::validate() const {
  if (n_vec.size() < 2) {
    throw std::invalid_argument("scenario '" + name + "' needs k >= 2");
  }
  if (distributions.size() != n_vec.size()) {
    throw std::invalid_argument("scenario '" + name +
                                "': one distribution per group is required");
  }
  for (auto n : n_vec) {
    if (n == 0) {
      throw std::invalid_argument("scenario '" + name +
                                  "': group sizes must be positive");
    }
  }
  if (reps < 1) {
    throw std::invalid_argument("scenario '" + name + "': reps must be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("scenario '" + name +
                                "': alpha must lie in (0, 1)");
  }
  if (order && order->k() != n_vec.size()) {
    throw std::invalid_argument("scenario '" + name +
                                "': order dimension differs from k");
  }
  if (!run_tn && !run_sn) {
    throw std::invalid_argument("scenario '" + name + "' selects no tests");
  }
}

PowerResult run_power(const Scenario& scenario, double crit_tn, double crit_sn,
                      int workers) {
  scenario.validate();
  const std::size_t k = scenario.k();
  const OrderSpec order = scenario.order.value_or(OrderSpec::simple(k));
  // One byte per replication and test; summed afterwards so the totals do not
  // depend on how replications were split across workers.
  std::vector<unsigned char> tn_reject(scenario.reps, 0);
  std::vector<unsigned char> sn_reject(scenario.reps, 0);
  parallel_for(scenario.reps, workers, [&](std::size_t begin, std::size_t end) {
    KSampleStatistic tn(order, scenario.n_vec, scenario.points);
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream(scenario.seed, r);
      std::vector<Sample> groups;
      groups.reserve(k);
      for (std::size_t j = 0; j < k; ++j) {
        groups.push_back(sample_distribution(scenario.distributions[j],
                                             scenario.n_vec[j], stream));
      }
      const GroupedSamples data(std::move(groups));
      if (scenario.run_tn) tn_reject[r] = tn(data) > crit_tn;
      if (scenario.run_sn) sn_reject[r] = sn_statistic(data).statistic > crit_sn;
    }
  });
  const auto tally = [&](const std::vector<unsigned char>& flags,
                         double crit) {
    TestRate rate;
    rate.reps = scenario.reps;
    rate.critical_value = crit;
    for (unsigned char f : flags) rate.rejections += f;
    return rate;
  };
  PowerResult result;
  result.seed = scenario.seed;
  if (scenario.run_tn) result.tn = tally(tn_reject, crit_tn);
  if (scenario.run_sn) result.sn = tally(sn_reject, crit_sn);
  return result;
}

}  // namespace stochorder
