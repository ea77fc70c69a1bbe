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

// Sequential one-sided Kolmogorov-Smirnov test S_n for F_1 > ... > F_k.
//
// Stage j (1 <= j < k) compares the pooled first j groups, with ecdf
// Fhat_{1:j} and size m_j, against group j+1:
//
//   D_j = sqrt(m_j n_{j+1} / (m_j + n_{j+1})) sup_x (Fhat_{j+1}(x) - Fhat_{1:j}(x))
//
// and S_n = max_j D_j. Under H0 the stages are asymptotically independent,
// each with the one-sided limit P(D <= s) = 1 - exp(-2 s^2).

#ifndef STOCHORDER_COMPETITOR_H_
#define STOCHORDER_COMPETITOR_H_

#include <cstddef>
#include <vector>

#include "stochorder/core.h"

namespace stochorder {

struct SnResult {
  double statistic = 0.0;
  std::vector<double> per_stage;  // D_1 .. D_{k-1}
};

SnResult sn_statistic(const GroupedSamples& data);

// s with (1 - exp(-2 s^2))^(k-1) = 1 - alpha. Throws std::invalid_argument
// unless 0 < alpha < 1 and k >= 2.
double sn_critical(double alpha, std::size_t k);

// Asymptotic tail probability 1 - (1 - exp(-2 s^2))^(k-1), s >= 0.
double sn_p_value(double statistic, std::size_t k);

}  // namespace stochorder

#endif  // STOCHORDER_COMPETITOR_H_
