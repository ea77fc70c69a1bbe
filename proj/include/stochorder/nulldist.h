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

// Monte Carlo null distributions of T_n, critical values and p-values.
//
// Three ways to tabulate:
//  * finite-sample: simulate k independent N(0,1) samples of the given sizes
//    and evaluate T_n directly;
//  * limit-one-sample: Riemann sum of B(t)^2 I(B(t) >= 0) / (t(1-t)) for a
//    standard Brownian bridge B;
//  * limit-k: Riemann sum of
//      sum_j w_j (P[B](t)_j - Bbar(t))^2 / (t(1-t)),
//    where B_j are independent bridges, B(t) = (B_j(t)/sqrt(w_j))_j, P is the
//    weighted projection onto the order's cone and Bbar = sum_j sqrt(w_j) B_j.
//
// Replication r always draws from RandomStream(seed, r), so results are
// identical for any worker count.

#ifndef STOCHORDER_NULLDIST_H_
#define STOCHORDER_NULLDIST_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stochorder/elstat.h"
#include "stochorder/isotone.h"

namespace stochorder {

enum class NullMethod {
  kFiniteSample,
  kLimitOneSample,
  kLimitK,
  kFiniteOneSample,  // one-sample T_n or T_n* on U(0,1) data
};

std::string to_string(NullMethod method);
// Throws std::invalid_argument for unknown names.
NullMethod parse_null_method(std::string_view name);

struct NullDistribution {
  std::vector<double> draws;  // sorted ascending
  NullMethod method = NullMethod::kFiniteSample;
  std::size_t k = 0;
  std::vector<double> weights;
  std::size_t reps = 0;
  std::size_t grid_size = 0;  // limit methods only
  std::uint64_t master_seed = 0;
  // Provenance beyond the core header fields.
  std::string order;                // OrderSpec text; empty for one-sample
  std::vector<std::size_t> sizes;   // finite methods only
  // "Tn", "Tn*" (finite one-sample) or "Tn-interior" (interior pooled points).
  std::string statistic = "Tn";
};

struct SimulationOptions {
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
};

inline constexpr std::size_t kDefaultGridSize = 1000;

NullDistribution simulate_null_finite(std::span<const std::size_t> n_per_group,
                                      const OrderSpec& order,
                                      const SimulationOptions& options,
                                      PooledPoints points = PooledPoints::kAll);

// Null distribution of the one-sample T_n (or T_n* when `star`) at sample
// size n; by the probability integral transform F0 = U(0, 1) suffices.
NullDistribution simulate_null_finite_one(std::size_t n, bool star,
                                          const SimulationOptions& options);

NullDistribution simulate_limit_one(std::size_t grid_size,
                                    const SimulationOptions& options);

NullDistribution simulate_limit_k(std::span<const double> weights,
                                  const OrderSpec& order, std::size_t grid_size,
                                  const SimulationOptions& options);

// Bridge on t_i = i/m, i = 1..m-1, from m iid N(0,1) increments `z`:
// W(t_i) = sum_{l<=i} z_l / sqrt(m), B(t_i) = W(t_i) - t_i W(1).
// `bridge` receives m-1 values.
void bridge_from_increments(std::span<const double> z, std::span<double> bridge);

// (1/m) sum_i B(t_i)^2 I(B(t_i) >= 0) / (t_i (1 - t_i)) for a bridge of
// m-1 interior values.
double limit_one_functional(std::span<const double> bridge);

// Limit-k functional for k bridges stored back to back (k * (m-1) values).
// `projector` carries the weights.
double limit_k_functional(std::span<const double> bridges,
                          IsotonicProjector& projector);

// Empirical (1 - alpha)-quantile: the ceil((1 - alpha) reps)-th order
// statistic. Throws std::invalid_argument unless 0 < alpha < 1.
double critical_value(const NullDistribution& dist, double alpha);

// (1 + #{draws >= observed}) / (reps + 1).
double p_value(const NullDistribution& dist, double observed);

// Text format: `key=value` header lines (method, k, weights, reps, seed, grid,
// then order, sizes, statistic) followed by one draw per line.
void write_null_distribution(std::ostream& out, const NullDistribution& dist);
// Throws std::runtime_error on malformed input.
NullDistribution read_null_distribution(std::istream& in);

// Cache identity: (method, k, weights rounded to 1e-9, reps, grid, seed,
// order, sizes, statistic).
std::string cache_key(const NullDistribution& dist);
// File name derived from cache_key.
std::string cache_file_name(const NullDistribution& dist);

}  // namespace stochorder

#endif  // STOCHORDER_NULLDIST_H_
