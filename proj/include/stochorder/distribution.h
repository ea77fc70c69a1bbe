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

// Continuous distribution families used as hypothesized cdfs and as data
// generators in power studies.
//
// Text form (used by the CLI and config files):
//   uniform:a=0,b=1
//   exponential:rate=1
//   normal:mean=0,variance=1
//   shifted-exponential:shift=0.1,rate=1

#ifndef STOCHORDER_DISTRIBUTION_H_
#define STOCHORDER_DISTRIBUTION_H_

#include <string>
#include <string_view>
#include <variant>

namespace stochorder {

struct Uniform {
  double a = 0.0;
  double b = 1.0;
};

// Parameterized by rate: cdf 1 - exp(-rate * x).
struct Exponential {
  double rate = 1.0;
};

// Second parameter is the variance, not the standard deviation.
struct Normal {
  double mean = 0.0;
  double variance = 1.0;
};

// shift + Exponential(rate).
struct ShiftedExponential {
  double shift = 0.0;
  double rate = 1.0;
};

class DistributionSpec {
 public:
  using Family = std::variant<Uniform, Exponential, Normal, ShiftedExponential>;

  // Throws std::invalid_argument on invalid parameters.
  DistributionSpec(Family family);  // NOLINT: implicit by intent

  const Family& family() const { return family_; }

  double cdf(double x) const;

  // Canonical text form; parse(to_string()) reproduces the spec exactly.
  std::string to_string() const;

  // Throws std::invalid_argument on malformed text.
  static DistributionSpec parse(std::string_view text);

 private:
  Family family_;
};

// Standard normal cdf.
double normal_cdf(double z);

}  // namespace stochorder

#endif  // STOCHORDER_DISTRIBUTION_H_
