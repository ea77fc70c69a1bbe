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

// Command implementations behind the `stochorder` executable. Each command
// takes a plain options struct and returns its report; the executable only
// parses flags and maps exceptions to exit codes:
//   InputError (and other std::runtime_error)  -> 2
//   std::invalid_argument (and std::logic_error) -> 3

#ifndef STOCHORDER_COMMANDS_H_
#define STOCHORDER_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stochorder/nulldist.h"

namespace stochorder::cli {

// Problems with input files: unreadable, malformed rows, unknown groups.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- ingestion ------------------------------------------------------------

struct GroupedData {
  std::vector<std::string> labels;             // first-occurrence order
  std::vector<std::vector<double>> values;     // parallel to labels
};

// CSV with header `group,value`. Blank lines and lines starting with '#' are
// skipped. Errors carry `source:line`.
GroupedData read_grouped_csv(std::istream& in, const std::string& source);
GroupedData read_grouped_csv_file(const std::string& path);

// CSV with header `value`.
std::vector<double> read_value_csv(std::istream& in, const std::string& source);
std::vector<double> read_value_csv_file(const std::string& path);

// Picks and orders groups for the hypothesis F_1 > F_2 > ... . Each entry of
// `order` names a group, or several joined by '+' to pool them. An empty
// `order` keeps first-occurrence order and appends a line to `notices`.
GroupedData select_groups(const GroupedData& data,
                          const std::vector<std::string>& order,
                          std::vector<std::string>* notices);

// ---- reports --------------------------------------------------------------

struct NullOptions {
  std::string method = "finite";  // "finite" or "limit"
  std::size_t reps = 10000;
  std::size_t grid = kDefaultGridSize;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string cache_dir;  // empty: no caching
  std::string null_file;  // precomputed distribution to use instead
};

struct StatisticReport {
  std::string name;
  double value = 0.0;
  double p_value = 1.0;
  std::string p_value_basis;  // "monte-carlo" or "asymptotic"
  std::vector<std::pair<double, double>> critical_values;  // (alpha, value)
};

struct NullProvenance {
  std::string method;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::size_t grid = 0;
};

struct TestReport {
  std::string test;
  std::vector<std::string> groups;
  std::size_t k = 0;
  std::vector<std::size_t> n_vec;
  std::string order;
  std::string points;  // k-sample only: pooled-points rule of T_n
  std::size_t tie_count = 0;
  NullProvenance null;
  std::vector<StatisticReport> statistics;  // first entry is T_n
  std::vector<double> sn_per_stage;

  std::string to_text() const;
  std::string to_json() const;
};

// ---- commands -------------------------------------------------------------

struct KSampleOptions {
  std::string data_path;
  std::vector<std::string> groups;
  std::string order = "simple";
  bool with_sn = false;
  PooledPoints points = PooledPoints::kAll;
  std::vector<double> alphas{0.01, 0.05, 0.10};
  NullOptions null;
};

TestReport cmd_k_sample(const KSampleOptions& options,
                        std::vector<std::string>* notices);

struct OneSampleOptions {
  std::string data_path;
  std::string f0;
  bool star = false;
  std::vector<double> alphas{0.01, 0.05, 0.10};
  NullOptions null;  // method "limit" (default here) or "finite"
};

TestReport cmd_one_sample(const OneSampleOptions& options,
                          std::vector<std::string>* notices);

struct CritvalOptions {
  std::vector<std::size_t> ks{2, 3, 4, 5};
  std::vector<double> alphas{0.01, 0.05, 0.10};
  std::size_t n = 100;  // per group, finite method
  std::string order = "simple";
  PooledPoints points = PooledPoints::kAll;  // finite method only
  NullOptions null;
};

struct CritvalTable {
  CritvalOptions options;
  std::vector<std::vector<double>> values;  // [k index][alpha index]

  std::string to_text() const;
  std::string to_json() const;
};

CritvalTable cmd_critvals(const CritvalOptions& options,
                          std::vector<std::string>* notices);

struct PowerOptions {
  std::string config_path;
  // Used only for scenarios without an explicit crit_tn.
  std::size_t crit_reps = 100000;
  std::size_t crit_n = 100;
  std::uint64_t crit_seed = 1;
  std::string cache_dir;
  int workers = 0;
};

struct PowerRow {
  std::string name;
  std::size_t k = 0;
  std::vector<std::size_t> n_vec;
  std::size_t reps = 0;
  double alpha = 0.0;
  std::optional<double> tn_rate, tn_se, tn_crit;
  std::optional<double> sn_rate, sn_se, sn_crit;
  std::uint64_t seed = 0;
};

std::vector<PowerRow> cmd_power(const PowerOptions& options,
                                std::vector<std::string>* notices);
std::string power_rows_to_text(const std::vector<PowerRow>& rows);
std::string power_rows_to_json(const std::vector<PowerRow>& rows);

struct SurvcurveOptions {
  std::string data_path;
  std::vector<std::string> groups;
};

// CSV with header `group,x,survival`: one row per distinct value of each
// group, survival = 1 - Fhat_j(x).
std::string cmd_survcurves(const SurvcurveOptions& options,
                           std::vector<std::string>* notices);

// Parses "0.01,0.05" style lists; throws std::invalid_argument.
std::vector<double> parse_alphas(const std::string& text);
// Parses "2..5" or "2,3,5"; throws std::invalid_argument.
std::vector<std::size_t> parse_k_list(const std::string& text);

}  // namespace stochorder::cli

#endif  // STOCHORDER_COMMANDS_H_
