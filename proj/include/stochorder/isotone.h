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

// Weighted least-squares projection onto the isotonic cone of a quasi-order.
//
// A quasi-order on {0, ..., k-1} is given by generating pairs (i, j), each
// meaning z_i <= z_j; the cone is every z satisfying the transitive closure.
// In stochastic-ordering terms the pair (i, j) encodes F_i > F_j (group i
// stochastically larger), i.e. cdf values nondecreasing from i to j.
//
// The simple chain z_0 <= ... <= z_{k-1} is solved by pool-adjacent-violators.
// Every other order is solved by the minimum-lower-sets algorithm, which
// enumerates lower sets and is meant for the small k (<= 20) used for group
// counts.

#ifndef STOCHORDER_ISOTONE_H_
#define STOCHORDER_ISOTONE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stochorder {

// Absolute tolerance used when checking cone constraints.
inline constexpr double kFeasibilityTolerance = 1e-12;

class OrderSpec {
 public:
  enum class Kind { kSimple, kTree, kUmbrella, kGeneral };
  using Pair = std::pair<std::size_t, std::size_t>;

  // All indices are 0-based here; the text form is 1-based.
  static OrderSpec simple(std::size_t k);
  // z_root <= z_i for every i != root.
  static OrderSpec tree(std::size_t k, std::size_t root);
  // z_0 <= ... <= z_peak >= ... >= z_{k-1}.
  static OrderSpec umbrella(std::size_t k, std::size_t peak);
  // Each pair (i, j) means z_i <= z_j.
  static OrderSpec general(std::size_t k, std::vector<Pair> relation);

  Kind kind() const { return kind_; }
  std::size_t k() const { return k_; }
  // Root for kTree, peak for kUmbrella, 0 otherwise.
  std::size_t anchor() const { return anchor_; }

  // Generating pairs (i, j): z_i <= z_j.
  const std::vector<Pair>& constraints() const { return constraints_; }

  // True if z_i <= z_j is implied (reflexive, transitive closure).
  bool precedes(std::size_t i, std::size_t j) const {
    return closure_[i * k_ + j];
  }

  bool is_feasible(std::span<const double> z,
                   double tolerance = kFeasibilityTolerance) const;

  // "simple", "tree:root=1", "umbrella:peak=2", "general:1<=2,1<=3".
  std::string to_string() const;
  // Throws std::invalid_argument on malformed text or out-of-range indices.
  static OrderSpec parse(std::string_view text, std::size_t k);

 private:
  OrderSpec(Kind kind, std::size_t k, std::size_t anchor,
            std::vector<Pair> constraints);

  Kind kind_;
  std::size_t k_;
  std::size_t anchor_;
  std::vector<Pair> constraints_;
  std::vector<bool> closure_;
};

struct Projection {
  std::vector<double> fitted;
  // Level sets; each block's members share one fitted value.
  std::vector<std::vector<std::size_t>> blocks;
};

// Isotonic regression under z_0 <= ... <= z_{k-1}. Adjacent blocks merge only
// on a strict violation. Throws std::invalid_argument on a non-positive
// weight or mismatched lengths.
Projection pava(std::span<const double> values,
                std::span<const double> weights);

// Projection onto the cone of `order`. Throws std::invalid_argument on
// inconsistent dimensions or a non-positive weight.
Projection project_cone(std::span<const double> values,
                        std::span<const double> weights,
                        const OrderSpec& order);

// Allocation-free projector for hot loops. Holds scratch space, so each
// thread needs its own instance.
class IsotonicProjector {
 public:
  IsotonicProjector(const OrderSpec& order, std::span<const double> weights);

  std::size_t k() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }

  // Writes the projection of `values` into `fitted` (both of length k).
  void project(std::span<const double> values, std::span<double> fitted);

  // Same, also reporting the level sets.
  Projection project_with_blocks(std::span<const double> values);

 private:
  void run(std::span<const double> values, std::span<double> fitted,
           std::vector<std::vector<std::size_t>>* blocks);
  void run_pava(std::span<const double> values, std::span<double> fitted,
                std::vector<std::vector<std::size_t>>* blocks);
  void run_lower_sets(std::span<const double> values, std::span<double> fitted,
                      std::vector<std::vector<std::size_t>>* blocks);

  bool chain_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> lower_sets_;
  // PAVA block stack.
  std::vector<double> block_weight_;
  std::vector<double> block_sum_;
  std::vector<std::size_t> block_end_;
};

}  // namespace stochorder

#endif  // STOCHORDER_ISOTONE_H_
