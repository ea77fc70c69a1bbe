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

#include "stochorder/nulldist.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "stochorder/elstat.h"
#include "stochorder/parallel.h"
#include "stochorder/random.h"
#include "text_util.h"

namespace stochorder {
namespace {

void require_reps(const SimulationOptions& options) {
  if (options.reps < 1) throw std::invalid_argument("reps must be >= 1");
}

void require_grid(std::size_t m) {
  if (m < 2) throw std::invalid_argument("grid size must be >= 2");
}

// Runs `draw(stream, scratch)` once per replication and returns the sorted
// draws. `make_scratch` builds per-worker state.
template <typename MakeScratch, typename Draw>
std::vector<double> run_replications(const SimulationOptions& options,
                                     MakeScratch make_scratch, Draw draw) {
  std::vector<double> draws(options.reps);
  parallel_for(options.reps, options.workers,
               [&](std::size_t begin, std::size_t end) {
                 auto scratch = make_scratch();
                 for (std::size_t r = begin; r < end; ++r) {
                   RandomStream stream(options.seed, r);
                   draws[r] = draw(stream, scratch);
                 }
               });
  std::sort(draws.begin(), draws.end());
  return draws;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(sizes[i]);
  }
  return out;
}

std::string join_weights(const std::vector<double>& weights, bool rounded) {
  std::string out;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i > 0) out += ',';
    if (rounded) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.9f", weights[i]);
      out += buf;
    } else {
      out += internal::format_exact(weights[i]);
    }
  }
  return out;
}

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("malformed null distribution: " + what);
}

}  // namespace

std::string to_string(NullMethod method) {
  switch (method) {
    case NullMethod::kFiniteSample:
      return "finite-sample";
    case NullMethod::kLimitOneSample:
      return "limit-one-sample";
    case NullMethod::kLimitK:
      return "limit-k";
    case NullMethod::kFiniteOneSample:
      return "finite-one-sample";
  }
  return "unknown";
}

NullMethod parse_null_method(std::string_view name) {
  if (name == "finite-sample") return NullMethod::kFiniteSample;
  if (name == "limit-one-sample") return NullMethod::kLimitOneSample;
  if (name == "limit-k") return NullMethod::kLimitK;
  if (name == "finite-one-sample") return NullMethod::kFiniteOneSample;
  throw std::invalid_argument("unknown null method '" + std::string(name) +
                              "'");
}

NullDistribution simulate_null_finite(std::span<const std::size_t> n_per_group,
                                      const OrderSpec& order,
                                      const SimulationOptions& options,
                                      PooledPoints points) {
  require_reps(options);
  const std::size_t k = n_per_group.size();
  if (k < 2 || order.k() != k) {
    throw std::invalid_argument("need >= 2 groups matching the order");
  }
  const std::vector<std::size_t> sizes(n_per_group.begin(), n_per_group.end());
  struct Scratch {
    KSampleStatistic statistic;
    std::vector<std::vector<double>> groups;
    std::vector<std::span<const double>> views;
  };
  auto make_scratch = [&] {
    Scratch s{KSampleStatistic(order, sizes, points), {}, {}};
    for (auto n : sizes) s.groups.emplace_back(n);
    for (const auto& g : s.groups) s.views.emplace_back(g);
    return s;
  };
  auto draw = [](RandomStream& stream, Scratch& s) {
    for (auto& g : s.groups) {
      for (double& v : g) v = stream.gaussian();
      std::sort(g.begin(), g.end());
    }
    return s.statistic(s.views);
  };

  NullDistribution dist;
  dist.draws = run_replications(options, make_scratch, draw);
  dist.method = NullMethod::kFiniteSample;
  dist.k = k;
  std::size_t total = 0;
  for (auto n : sizes) total += n;
  for (auto n : sizes) {
    dist.weights.push_back(static_cast<double>(n) / static_cast<double>(total));
  }
  dist.reps = options.reps;
  dist.master_seed = options.seed;
  dist.order = order.to_string();
  dist.sizes = sizes;
  if (points == PooledPoints::kInterior) dist.statistic = "Tn-interior";
  return dist;
}

NullDistribution simulate_null_finite_one(std::size_t n, bool star,
                                          const SimulationOptions& options) {
  require_reps(options);
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  const F0Spec uniform(DistributionSpec(Uniform{0.0, 1.0}));
  auto make_scratch = [&] { return std::vector<double>(n); };
  auto draw = [&](RandomStream& stream, std::vector<double>& buf) {
    for (double& v : buf) v = stream.uniform();
    const Sample sample(buf);
    return star ? one_sample_Tn_star(sample, uniform)
                : one_sample_Tn(sample, uniform);
  };
  NullDistribution dist;
  dist.draws = run_replications(options, make_scratch, draw);
  dist.method = NullMethod::kFiniteOneSample;
  dist.k = 1;
  dist.weights = {1.0};
  dist.reps = options.reps;
  dist.master_seed = options.seed;
  dist.sizes = {n};
  dist.statistic = star ? "Tn*" : "Tn";
  return dist;
}

void bridge_from_increments(std::span<const double> z,
                            std::span<double> bridge) {
  const std::size_t m = z.size();
  if (m < 2 || bridge.size() != m - 1) {
    throw std::invalid_argument("bridge needs m >= 2 increments, m-1 outputs");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  double w = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    w += z[i] * scale;
    bridge[i] = w;
  }
  const double w1 = w + z[m - 1] * scale;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double t = static_cast<double>(i + 1) / static_cast<double>(m);
    bridge[i] -= t * w1;
  }
}

double limit_one_functional(std::span<const double> bridge) {
  const std::size_t m = bridge.size() + 1;
  const double dm = static_cast<double>(m);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double b = bridge[i];
    if (b < 0.0) continue;
    const double t = static_cast<double>(i + 1) / dm;
    sum += b * b / (t * (1.0 - t));
  }
  return sum / dm;
}

double limit_k_functional(std::span<const double> bridges,
                          IsotonicProjector& projector) {
  const std::size_t k = projector.k();
  if (k == 0 || bridges.size() % k != 0) {
    throw std::invalid_argument("bridge storage does not match k");
  }
  const std::size_t interior = bridges.size() / k;
  const std::size_t m = interior + 1;
  const double dm = static_cast<double>(m);
  const auto w = projector.weights();
  std::vector<double> root_w(k), scaled(k), fitted(k);
  for (std::size_t j = 0; j < k; ++j) root_w[j] = std::sqrt(w[j]);
  double sum = 0.0;
  for (std::size_t i = 0; i < interior; ++i) {
    double bbar = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double b = bridges[j * interior + i];
      scaled[j] = b / root_w[j];
      bbar += root_w[j] * b;
    }
    projector.project(scaled, fitted);
    double dev = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = fitted[j] - bbar;
      dev += w[j] * d * d;
    }
    const double t = static_cast<double>(i + 1) / dm;
    sum += dev / (t * (1.0 - t));
  }
  return sum / dm;
}

NullDistribution simulate_limit_one(std::size_t grid_size,
                                    const SimulationOptions& options) {
  require_reps(options);
  require_grid(grid_size);
  struct Scratch {
    std::vector<double> z, bridge;
  };
  auto make_scratch = [&] {
    return Scratch{std::vector<double>(grid_size),
                   std::vector<double>(grid_size - 1)};
  };
  auto draw = [](RandomStream& stream, Scratch& s) {
    for (double& v : s.z) v = stream.gaussian();
    bridge_from_increments(s.z, s.bridge);
    return limit_one_functional(s.bridge);
  };
  NullDistribution dist;
  dist.draws = run_replications(options, make_scratch, draw);
  dist.method = NullMethod::kLimitOneSample;
  dist.k = 1;
  dist.weights = {1.0};
  dist.reps = options.reps;
  dist.grid_size = grid_size;
  dist.master_seed = options.seed;
  return dist;
}

NullDistribution simulate_limit_k(std::span<const double> weights,
                                  const OrderSpec& order, std::size_t grid_size,
                                  const SimulationOptions& options) {
  require_reps(options);
  require_grid(grid_size);
  const std::size_t k = weights.size();
  if (k < 2 || order.k() != k) {
    throw std::invalid_argument("need >= 2 weights matching the order");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1");
  }
  const std::vector<double> w(weights.begin(), weights.end());
  struct Scratch {
    IsotonicProjector projector;
    std::vector<double> z, bridges;
  };
  const std::size_t interior = grid_size - 1;
  auto make_scratch = [&] {
    return Scratch{IsotonicProjector(order, w), std::vector<double>(grid_size),
                   std::vector<double>(k * interior)};
  };
  auto draw = [&](RandomStream& stream, Scratch& s) {
    for (std::size_t j = 0; j < k; ++j) {
      for (double& v : s.z) v = stream.gaussian();
      bridge_from_increments(
          s.z, std::span<double>(s.bridges).subspan(j * interior, interior));
    }
    return limit_k_functional(s.bridges, s.projector);
  };
  NullDistribution dist;
  dist.draws = run_replications(options, make_scratch, draw);
  dist.method = NullMethod::kLimitK;
  dist.k = k;
  dist.weights = w;
  dist.reps = options.reps;
  dist.grid_size = grid_size;
  dist.master_seed = options.seed;
  dist.order = order.to_string();
  return dist;
}

double critical_value(const NullDistribution& dist, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (dist.draws.empty()) throw std::invalid_argument("empty null distribution");
  const double reps = static_cast<double>(dist.draws.size());
  // The 1e-9 slack keeps (1 - 0.05) * 100 at 95 rather than 96.
  auto index = static_cast<std::size_t>(std::ceil((1.0 - alpha) * reps - 1e-9));
  index = std::clamp<std::size_t>(index, 1, dist.draws.size());
  return dist.draws[index - 1];
}

double p_value(const NullDistribution& dist, double observed) {
  if (dist.draws.empty()) throw std::invalid_argument("empty null distribution");
  const auto at_least = dist.draws.end() -
                        std::lower_bound(dist.draws.begin(), dist.draws.end(),
                                         observed);
  return (1.0 + static_cast<double>(at_least)) /
         (static_cast<double>(dist.draws.size()) + 1.0);
}

void write_null_distribution(std::ostream& out, const NullDistribution& dist) {
  out << "method=" << to_string(dist.method) << '\n'
      << "k=" << dist.k << '\n'
      << "weights=" << join_weights(dist.weights, false) << '\n'
      << "reps=" << dist.reps << '\n'
      << "seed=" << dist.master_seed << '\n'
      << "grid=" << dist.grid_size << '\n'
      << "order=" << dist.order << '\n'
      << "sizes=" << join_sizes(dist.sizes) << '\n'
      << "statistic=" << dist.statistic << '\n';
  for (double d : dist.draws) out << internal::format_exact(d) << '\n';
}

NullDistribution read_null_distribution(std::istream& in) {
  std::map<std::string, std::string, std::less<>> header;
  NullDistribution dist;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = internal::trim(line);
    if (text.empty()) continue;
    const std::size_t eq = text.find('=');
    if (eq != std::string_view::npos) {
      if (!dist.draws.empty()) malformed("header after draws, line " +
                                         std::to_string(line_no));
      header[std::string(text.substr(0, eq))] = std::string(text.substr(eq + 1));
      continue;
    }
    const auto v = internal::parse_double(text);
    if (!v || *v < 0.0 || !std::isfinite(*v)) {
      malformed("bad draw on line " + std::to_string(line_no));
    }
    dist.draws.push_back(*v);
  }
  const auto field = [&](std::string_view key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) malformed("missing '" + std::string(key) + "'");
    return it->second;
  };
  const auto integer = [&](std::string_view key) {
    const auto v = internal::parse_int<std::uint64_t>(field(key));
    if (!v) malformed("non-integer '" + std::string(key) + "'");
    return *v;
  };
  try {
    dist.method = parse_null_method(field("method"));
  } catch (const std::invalid_argument& e) {
    malformed(e.what());
  }
  dist.k = integer("k");
  dist.reps = integer("reps");
  dist.master_seed = integer("seed");
  dist.grid_size = integer("grid");
  for (std::string_view item : internal::split(field("weights"), ',')) {
    const auto v = internal::parse_double(item);
    if (!v) malformed("bad weight '" + std::string(item) + "'");
    dist.weights.push_back(*v);
  }
  if (header.contains("order")) dist.order = header["order"];
  if (header.contains("statistic")) dist.statistic = header["statistic"];
  if (header.contains("sizes") && !header["sizes"].empty()) {
    for (std::string_view item : internal::split(header["sizes"], ',')) {
      const auto v = internal::parse_int<std::size_t>(item);
      if (!v) malformed("bad size '" + std::string(item) + "'");
      dist.sizes.push_back(*v);
    }
  }
  if (dist.reps < 1 || dist.draws.size() != dist.reps) {
    malformed("expected " + std::to_string(dist.reps) + " draws, found " +
              std::to_string(dist.draws.size()));
  }
  if (dist.weights.size() != dist.k) malformed("weights do not match k");
  if (!std::is_sorted(dist.draws.begin(), dist.draws.end())) {
    malformed("draws are not sorted");
  }
  return dist;
}

std::string cache_key(const NullDistribution& dist) {
  return "method=" + to_string(dist.method) + ";k=" + std::to_string(dist.k) +
         ";weights=" + join_weights(dist.weights, true) +
         ";reps=" + std::to_string(dist.reps) +
         ";grid=" + std::to_string(dist.grid_size) +
         ";seed=" + std::to_string(dist.master_seed) + ";order=" + dist.order +
         ";sizes=" + join_sizes(dist.sizes) + ";statistic=" + dist.statistic;
}

std::string cache_file_name(const NullDistribution& dist) {
  std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : cache_key(dist)) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "null-%016llx.txt",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace stochorder
