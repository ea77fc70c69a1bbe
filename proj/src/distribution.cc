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

#include "stochorder/distribution.h"

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "text_util.h"

namespace stochorder {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate(const DistributionSpec::Family& family) {
  std::visit(
      Overloaded{
          [](const Uniform& d) {
            require(std::isfinite(d.a) && std::isfinite(d.b) && d.b > d.a,
                    "uniform requires finite a < b");
          },
          [](const Exponential& d) {
            require(std::isfinite(d.rate) && d.rate > 0,
                    "exponential requires rate > 0");
          },
          [](const Normal& d) {
            require(std::isfinite(d.mean) && std::isfinite(d.variance) &&
                        d.variance > 0,
                    "normal requires variance > 0");
          },
          [](const ShiftedExponential& d) {
            require(std::isfinite(d.shift) && std::isfinite(d.rate) &&
                        d.rate > 0,
                    "shifted-exponential requires rate > 0");
          },
      },
      family);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

DistributionSpec::DistributionSpec(Family family) : family_(family) {
  validate(family_);
}

double DistributionSpec::cdf(double x) const {
  return std::visit(
      Overloaded{
          [x](const Uniform& d) {
            if (x <= d.a) return 0.0;
            if (x >= d.b) return 1.0;
            return (x - d.a) / (d.b - d.a);
          },
          [x](const Exponential& d) {
            return x <= 0 ? 0.0 : -std::expm1(-d.rate * x);
          },
          [x](const Normal& d) {
            return normal_cdf((x - d.mean) / std::sqrt(d.variance));
          },
          [x](const ShiftedExponential& d) {
            const double y = x - d.shift;
            return y <= 0 ? 0.0 : -std::expm1(-d.rate * y);
          },
      },
      family_);
}

std::string DistributionSpec::to_string() const {
  using internal::format_exact;
  return std::visit(
      Overloaded{
          [](const Uniform& d) {
            return "uniform:a=" + format_exact(d.a) +
                   ",b=" + format_exact(d.b);
          },
          [](const Exponential& d) {
            return "exponential:rate=" + format_exact(d.rate);
          },
          [](const Normal& d) {
            return "normal:mean=" + format_exact(d.mean) +
                   ",variance=" + format_exact(d.variance);
          },
          [](const ShiftedExponential& d) {
            return "shifted-exponential:shift=" + format_exact(d.shift) +
                   ",rate=" + format_exact(d.rate);
          },
      },
      family_);
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
  text = internal::trim(text);
  const std::size_t colon = text.find(':');
  const std::string_view name = internal::trim(text.substr(0, colon));
  std::map<std::string, double, std::less<>> params;
  if (colon != std::string_view::npos) {
    for (std::string_view item : internal::split(text.substr(colon + 1), ',')) {
      const std::size_t eq = item.find('=');
      require(eq != std::string_view::npos,
              "malformed distribution parameter '" + std::string(item) + "'");
      const auto key = std::string(internal::trim(item.substr(0, eq)));
      const auto value = internal::parse_double(item.substr(eq + 1));
      require(value.has_value(),
              "non-numeric value for parameter '" + key + "'");
      require(params.emplace(key, *value).second,
              "duplicate parameter '" + key + "'");
    }
  }
  const auto take = [&](std::string_view key) {
    const auto it = params.find(key);
    require(it != params.end(), "distribution '" + std::string(name) +
                                    "' is missing parameter '" +
                                    std::string(key) + "'");
    const double v = it->second;
    params.erase(it);
    return v;
  };
  std::optional<Family> family;
  if (name == "uniform") {
    const double a = take("a");
    family = Uniform{a, take("b")};
  } else if (name == "exponential") {
    family = Exponential{take("rate")};
  } else if (name == "normal") {
    const double mean = take("mean");
    family = Normal{mean, take("variance")};
  } else if (name == "shifted-exponential") {
    const double shift = take("shift");
    family = ShiftedExponential{shift, take("rate")};
  } else {
    throw std::invalid_argument("unknown distribution family '" +
                                std::string(name) + "'");
  }
  require(params.empty(), "unexpected parameter '" +
                              (params.empty() ? "" : params.begin()->first) +
                              "' for distribution '" + std::string(name) + "'");
  return DistributionSpec(*family);
}

}  // namespace stochorder
