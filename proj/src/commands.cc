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

#include "stochorder/commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "stochorder/competitor.h"
#include "stochorder/core.h"
#include "stochorder/distribution.h"
#include "stochorder/elstat.h"
#include "stochorder/isotone.h"
#include "stochorder/power.h"
#include "text_util.h"

namespace stochorder::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kReportDigits = 6;

std::string num(double v) { return internal::format_g(v, kReportDigits); }

// Value rounded to the report precision, for JSON output.
double rounded(double v) { return std::stod(num(v)); }

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::vector<std::string> parts;
  for (auto s : sizes) parts.push_back(std::to_string(s));
  return join(parts, ",");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

// Reads non-comment lines; checks the header. Calls row(fields, line_no).
void read_csv(std::istream& in, const std::string& source,
              const std::vector<std::string>& header,
              const std::function<void(const std::vector<std::string_view>&,
                                       std::size_t)>& row) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (line_no == 1 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    text = internal::trim(text);
    if (text.empty() || text.front() == '#') continue;
    auto fields = internal::split(text, ',');
    for (auto& f : fields) f = internal::trim(f);
    const std::string where = source + ":" + std::to_string(line_no);
    if (!seen_header) {
      std::vector<std::string> got(fields.begin(), fields.end());
      if (got != header) {
        throw InputError(where + ": expected header '" + join(header, ",") +
                         "'");
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw InputError(where + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    row(fields, line_no);
  }
  if (!seen_header) throw InputError(source + ": missing header line");
}

double parse_value(std::string_view field, const std::string& where) {
  const auto v = internal::parse_double(field);
  if (!v || !std::isfinite(*v)) {
    throw InputError(where + ": '" + std::string(field) +
                     "' is not a finite number");
  }
  return *v;
}

// ---- null distributions ---------------------------------------------------

// Statistic tag of a finite k-sample null; enters the cache key.
std::string tn_name(PooledPoints points) {
  return points == PooledPoints::kAll ? "Tn" : "Tn-interior";
}

NullDistribution descriptor(NullMethod method, std::size_t k,
                            std::vector<double> weights, const NullOptions& o,
                            std::size_t grid, std::string order,
                            std::vector<std::size_t> sizes,
                            std::string statistic = "Tn") {
  NullDistribution d;
  d.method = method;
  d.k = k;
  d.weights = std::move(weights);
  d.reps = o.reps;
  d.grid_size = grid;
  d.master_seed = o.seed;
  d.order = std::move(order);
  d.sizes = std::move(sizes);
  d.statistic = std::move(statistic);
  return d;
}

// Loads `o.null_file`, a cached file matching `want`, or simulates and caches.
NullDistribution obtain_null(const NullDistribution& want, const NullOptions& o,
                             const std::function<NullDistribution()>& simulate,
                             std::vector<std::string>* notices) {
  if (!o.null_file.empty()) {
    auto in = open_input(o.null_file);
    NullDistribution dist = read_null_distribution(in);
    if (dist.method != want.method || dist.k != want.k ||
        dist.statistic != want.statistic ||
        (!want.sizes.empty() && dist.sizes != want.sizes)) {
      throw InputError("null distribution in '" + o.null_file +
                       "' does not match this test (" + cache_key(want) + ")");
    }
    if (notices) notices->push_back("using null distribution " + o.null_file);
    return dist;
  }
  fs::path path;
  if (!o.cache_dir.empty()) {
    path = fs::path(o.cache_dir) / cache_file_name(want);
    if (fs::exists(path)) {
      std::ifstream in(path);
      NullDistribution dist = read_null_distribution(in);
      if (cache_key(dist) == cache_key(want)) {
        if (notices) notices->push_back("loaded cached null " + path.string());
        return dist;
      }
      if (notices) {
        notices->push_back("ignoring mismatched cache file " + path.string());
      }
    }
  }
  NullDistribution dist = simulate();
  if (cache_key(dist) != cache_key(want)) {
    throw std::logic_error("simulated null does not match its descriptor");
  }
  if (!path.empty()) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      write_null_distribution(out, dist);
      if (!out) throw InputError("cannot write cache file " + tmp.string());
    }
    fs::rename(tmp, path);
    if (notices) notices->push_back("cached null " + path.string());
  }
  return dist;
}

SimulationOptions sim_options(const NullOptions& o) {
  return SimulationOptions{o.reps, o.seed, o.workers};
}

void check_null_options(const NullOptions& o) {
  if (o.method != "finite" && o.method != "limit") {
    throw std::invalid_argument("null method must be 'finite' or 'limit'");
  }
  if (o.reps < 1) throw std::invalid_argument("--reps must be >= 1");
  if (o.grid < 2) throw std::invalid_argument("--grid must be >= 2");
}

void check_alphas(const std::vector<double>& alphas) {
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("alpha values must lie in (0, 1)");
    }
  }
}

StatisticReport mc_statistic(std::string name, double value,
                             const NullDistribution& null,
                             const std::vector<double>& alphas) {
  StatisticReport s;
  s.name = std::move(name);
  s.value = value;
  s.p_value = p_value(null, value);
  s.p_value_basis = "monte-carlo";
  for (double a : alphas) s.critical_values.emplace_back(a, critical_value(null, a));
  return s;
}

NullProvenance provenance(const NullDistribution& d) {
  return NullProvenance{to_string(d.method), d.reps, d.master_seed, d.grid_size};
}

json rounded_pairs(const std::vector<std::pair<double, double>>& pairs) {
  json out = json::array();
  for (const auto& [a, v] : pairs) {
    out.push_back({{"alpha", a}, {"value", rounded(v)}});
  }
  return out;
}

// ---- power config ----------------------------------------------------------

[[noreturn]] void config_error(const std::string& where,
                               const std::string& what) {
  throw InputError("malformed config: " + where + ": " + what);
}

Scenario parse_scenario(const json& j, const std::string& where,
                        std::optional<double>* crit_tn,
                        std::optional<double>* crit_sn) {
  if (!j.is_object()) config_error(where, "must be an object");
  static const std::vector<std::string> kKnown = {
      "name", "k", "n", "distributions", "reps", "alpha",
      "order", "tests", "seed", "crit_tn", "crit_sn", "points"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      config_error(where + "." + key, "unknown field");
    }
  }
  const auto positive_int = [&](const char* key) -> std::uint64_t {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
      config_error(where + "." + key, "must be a positive integer");
    }
    return v.get<std::uint64_t>();
  };
  Scenario sc;
  if (j.contains("name")) {
    if (!j["name"].is_string()) config_error(where + ".name", "must be a string");
    sc.name = j["name"].get<std::string>();
  } else {
    sc.name = where;
  }
  if (!j.contains("n") || !j["n"].is_array()) {
    config_error(where + ".n", "must be an array of group sizes");
  }
  for (std::size_t i = 0; i < j["n"].size(); ++i) {
    const auto& v = j["n"][i];
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
      config_error(where + ".n[" + std::to_string(i) + "]",
                   "must be a positive integer");
    }
    sc.n_vec.push_back(v.get<std::size_t>());
  }
  if (sc.n_vec.size() < 2) config_error(where + ".n", "needs at least 2 groups");
  if (j.contains("k") && positive_int("k") != sc.n_vec.size()) {
    config_error(where + ".k", "does not match the length of n");
  }
  if (!j.contains("distributions") || !j["distributions"].is_array()) {
    config_error(where + ".distributions", "must be an array of strings");
  }
  const auto& dists = j["distributions"];
  if (dists.size() != sc.n_vec.size()) {
    config_error(where + ".distributions", "needs one entry per group");
  }
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const std::string field = where + ".distributions[" + std::to_string(i) + "]";
    if (!dists[i].is_string()) config_error(field, "must be a string");
    try {
      sc.distributions.push_back(
          DistributionSpec::parse(dists[i].get<std::string>()));
    } catch (const std::invalid_argument& e) {
      config_error(field, e.what());
    }
  }
  if (j.contains("reps")) sc.reps = positive_int("reps");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      config_error(where + ".seed", "must be a nonnegative integer");
    }
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("alpha")) {
    if (!j["alpha"].is_number()) config_error(where + ".alpha", "must be a number");
    sc.alpha = j["alpha"].get<double>();
    if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) {
      config_error(where + ".alpha", "must lie in (0, 1)");
    }
  }
  if (j.contains("order")) {
    if (!j["order"].is_string()) config_error(where + ".order", "must be a string");
    try {
      sc.order = OrderSpec::parse(j["order"].get<std::string>(), sc.n_vec.size());
    } catch (const std::invalid_argument& e) {
      config_error(where + ".order", e.what());
    }
  }
  if (j.contains("points")) {
    if (!j["points"].is_string()) config_error(where + ".points", "must be a string");
    try {
      sc.points = parse_pooled_points(j["points"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      config_error(where + ".points", e.what());
    }
  }
  if (j.contains("tests")) {
    if (!j["tests"].is_array()) config_error(where + ".tests", "must be an array");
    sc.run_tn = sc.run_sn = false;
    for (const auto& t : j["tests"]) {
      if (t == "Tn") {
        sc.run_tn = true;
      } else if (t == "Sn") {
        sc.run_sn = true;
      } else {
        config_error(where + ".tests", "entries must be \"Tn\" or \"Sn\"");
      }
    }
    if (!sc.run_tn && !sc.run_sn) config_error(where + ".tests", "is empty");
  }
  const auto crit = [&](const char* key, std::optional<double>* out) {
    if (!j.contains(key) || j[key].is_null()) return;
    if (!j[key].is_number() || j[key].get<double>() < 0.0) {
      config_error(where + "." + key, "must be a nonnegative number");
    }
    *out = j[key].get<double>();
  };
  crit("crit_tn", crit_tn);
  crit("crit_sn", crit_sn);
  if (sc.run_sn && sc.order && sc.order->kind() != OrderSpec::Kind::kSimple) {
    config_error(where + ".tests", "Sn applies to the simple order only");
  }
  return sc;
}

}  // namespace

// ---- ingestion --------------------------------------------------------------

GroupedData read_grouped_csv(std::istream& in, const std::string& source) {
  GroupedData data;
  std::map<std::string, std::size_t, std::less<>> index;
  read_csv(in, source, {"group", "value"},
           [&](const std::vector<std::string_view>& f, std::size_t line_no) {
             const std::string where = source + ":" + std::to_string(line_no);
             if (f[0].empty()) throw InputError(where + ": empty group label");
             const double v = parse_value(f[1], where);
             auto it = index.find(f[0]);
             if (it == index.end()) {
               it = index.emplace(std::string(f[0]), data.labels.size()).first;
               data.labels.emplace_back(f[0]);
               data.values.emplace_back();
             }
             data.values[it->second].push_back(v);
           });
  if (data.labels.empty()) throw InputError(source + ": no data rows");
  return data;
}

GroupedData read_grouped_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_grouped_csv(in, path);
}

std::vector<double> read_value_csv(std::istream& in, const std::string& source) {
  std::vector<double> values;
  read_csv(in, source, {"value"},
           [&](const std::vector<std::string_view>& f, std::size_t line_no) {
             values.push_back(
                 parse_value(f[0], source + ":" + std::to_string(line_no)));
           });
  if (values.empty()) throw InputError(source + ": no data rows");
  return values;
}

std::vector<double> read_value_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_value_csv(in, path);
}

GroupedData select_groups(const GroupedData& data,
                          const std::vector<std::string>& order,
                          std::vector<std::string>* notices) {
  if (order.empty()) {
    if (notices) {
      notices->push_back("no --groups given; hypothesis order follows first "
                         "occurrence: " + join(data.labels, " > "));
    }
    return data;
  }
  GroupedData out;
  std::vector<bool> used(data.labels.size(), false);
  for (const std::string& entry : order) {
    std::vector<double> pooled;
    for (std::string_view part : internal::split(entry, '+')) {
      part = internal::trim(part);
      const auto it = std::find(data.labels.begin(), data.labels.end(), part);
      if (it == data.labels.end()) {
        throw InputError("unknown group '" + std::string(part) +
                         "' in --groups (known: " + join(data.labels, ",") +
                         ")");
      }
      const auto idx = static_cast<std::size_t>(it - data.labels.begin());
      if (used[idx]) {
        throw InputError("group '" + std::string(part) +
                         "' appears more than once in --groups");
      }
      used[idx] = true;
      pooled.insert(pooled.end(), data.values[idx].begin(),
                    data.values[idx].end());
    }
    out.labels.push_back(entry);
    out.values.push_back(std::move(pooled));
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i] && notices) {
      notices->push_back("group '" + data.labels[i] + "' not in --groups; ignored");
    }
  }
  return out;
}

// ---- reports ----------------------------------------------------------------

std::string TestReport::to_text() const {
  std::ostringstream out;
  out << "test: " << test << '\n';
  if (!groups.empty()) out << "groups: " << join(groups, " > ") << '\n';
  out << "k: " << k << '\n'
      << "n: " << join_sizes(n_vec) << '\n'
      << "order: " << (order.empty() ? "none" : order) << '\n';
  if (!points.empty()) out << "points: " << points << '\n';
  out
      << "ties: " << tie_count << '\n'
      << "null: method=" << null.method << " reps=" << null.reps
      << " seed=" << null.seed << " grid=" << null.grid << '\n';
  for (const auto& s : statistics) {
    out << "statistic " << s.name << ": " << num(s.value) << '\n'
        << "  p-value (" << s.p_value_basis << "): " << num(s.p_value) << '\n';
    for (const auto& [a, v] : s.critical_values) {
      out << "  critical value alpha=" << num(a) << ": " << num(v) << '\n';
    }
  }
  if (!sn_per_stage.empty()) {
    out << "Sn stages:";
    for (double d : sn_per_stage) out << ' ' << num(d);
    out << '\n';
  }
  return out.str();
}

std::string TestReport::to_json() const {
  json j;
  j["test"] = test;
  j["groups"] = groups;
  j["k"] = k;
  j["n"] = n_vec;
  j["order"] = order;
  if (!points.empty()) j["points"] = points;
  j["tie_count"] = tie_count;
  j["null"] = {{"method", null.method},
               {"reps", null.reps},
               {"seed", null.seed},
               {"grid", null.grid}};
  json stats = json::array();
  for (const auto& s : statistics) {
    stats.push_back({{"name", s.name},
                     {"value", rounded(s.value)},
                     {"p_value", rounded(s.p_value)},
                     {"p_value_basis", s.p_value_basis},
                     {"critical_values", rounded_pairs(s.critical_values)}});
  }
  j["statistics"] = stats;
  if (!sn_per_stage.empty()) {
    json stages = json::array();
    for (double d : sn_per_stage) stages.push_back(rounded(d));
    j["sn_stages"] = stages;
  }
  return j.dump(2) + "\n";
}

// ---- commands ---------------------------------------------------------------

TestReport cmd_k_sample(const KSampleOptions& options,
                        std::vector<std::string>* notices) {
  check_null_options(options.null);
  check_alphas(options.alphas);
  const GroupedData raw = read_grouped_csv_file(options.data_path);
  const GroupedData chosen = select_groups(raw, options.groups, notices);
  if (chosen.labels.size() < 2) {
    throw InputError("the k-sample test needs at least 2 groups, found " +
                     std::to_string(chosen.labels.size()));
  }
  std::vector<Sample> samples;
  for (std::size_t j = 0; j < chosen.labels.size(); ++j) {
    samples.emplace_back(chosen.values[j], chosen.labels[j]);
  }
  const GroupedSamples data(std::move(samples));
  const OrderSpec order = OrderSpec::parse(options.order, data.k());
  if (options.with_sn && order.kind() != OrderSpec::Kind::kSimple) {
    throw std::invalid_argument("Sn applies to the simple order only");
  }

  TestReport report;
  report.test = "k-sample";
  report.groups = chosen.labels;
  report.k = data.k();
  report.n_vec = data.sizes();
  report.order = order.to_string();
  report.points = to_string(options.points);
  report.tie_count = build_pooled_grid(data).tie_count();
  if (report.tie_count > 0 && notices) {
    notices->push_back(std::to_string(report.tie_count) +
                       " pooled values are tied across observations");
  }
  const double tn = k_sample_Tn(data, order, options.points);
  const std::vector<double> weights(data.weights().begin(),
                                    data.weights().end());

  const NullOptions& o = options.null;
  NullDistribution null;
  if (o.method == "finite") {
    const auto want =
        descriptor(NullMethod::kFiniteSample, data.k(), weights, o, 0,
                   order.to_string(), report.n_vec, tn_name(options.points));
    null = obtain_null(want, o, [&] {
      return simulate_null_finite(report.n_vec, order, sim_options(o),
                                  options.points);
    }, notices);
  } else {
    const auto want = descriptor(NullMethod::kLimitK, data.k(), weights, o,
                                 o.grid, order.to_string(), {});
    null = obtain_null(want, o, [&] {
      return simulate_limit_k(weights, order, o.grid, sim_options(o));
    }, notices);
  }
  report.null = provenance(null);
  report.statistics.push_back(mc_statistic("Tn", tn, null, options.alphas));

  if (options.with_sn) {
    const SnResult sn = sn_statistic(data);
    StatisticReport s;
    s.name = "Sn";
    s.value = sn.statistic;
    s.p_value = sn_p_value(sn.statistic, data.k());
    s.p_value_basis = "asymptotic";
    for (double a : options.alphas) {
      s.critical_values.emplace_back(a, sn_critical(a, data.k()));
    }
    report.statistics.push_back(s);
    report.sn_per_stage = sn.per_stage;
  }
  return report;
}

TestReport cmd_one_sample(const OneSampleOptions& options,
                          std::vector<std::string>* notices) {
  check_null_options(options.null);
  check_alphas(options.alphas);
  const F0Spec f0(DistributionSpec::parse(options.f0));
  const Sample sample(read_value_csv_file(options.data_path));

  TestReport report;
  report.test = "one-sample";
  report.groups = {};
  report.k = 1;
  report.n_vec = {sample.size()};
  report.order = "";
  for (std::size_t i = 1; i < sample.size(); ++i) {
    if (sample.values()[i] == sample.values()[i - 1] &&
        (i == 1 || sample.values()[i - 1] != sample.values()[i - 2])) {
      ++report.tie_count;
    }
  }

  const NullOptions& o = options.null;
  const auto null_for = [&](bool star) {
    if (o.method == "limit") {
      const auto want = descriptor(NullMethod::kLimitOneSample, 1, {1.0}, o,
                                   o.grid, "", {});
      return obtain_null(want, o, [&] {
        return simulate_limit_one(o.grid, sim_options(o));
      }, notices);
    }
    const auto want = descriptor(NullMethod::kFiniteOneSample, 1, {1.0}, o, 0,
                                 "", {sample.size()}, star ? "Tn*" : "Tn");
    return obtain_null(want, o, [&] {
      return simulate_null_finite_one(sample.size(), star, sim_options(o));
    }, notices);
  };
  const NullDistribution null_tn = null_for(false);
  report.null = provenance(null_tn);
  report.statistics.push_back(
      mc_statistic("Tn", one_sample_Tn(sample, f0), null_tn, options.alphas));
  if (options.star) {
    const NullDistribution null_star =
        o.method == "limit" ? null_tn : null_for(true);
    report.statistics.push_back(mc_statistic(
        "Tn*", one_sample_Tn_star(sample, f0), null_star, options.alphas));
  }
  return report;
}

std::string CritvalTable::to_text() const {
  const auto& o = options;
  std::ostringstream out;
  out << "# critical values of Tn: method=" << o.null.method
      << " reps=" << o.null.reps << " seed=" << o.null.seed;
  if (o.null.method == "finite") {
    out << " n=" << o.n;
  } else {
    out << " grid=" << o.null.grid;
  }
  out << " order=" << o.order;
  if (o.null.method == "finite") out << " points=" << to_string(o.points);
  out << '\n' << "k";
  for (double a : o.alphas) out << '\t' << num(a);
  out << '\n';
  for (std::size_t i = 0; i < o.ks.size(); ++i) {
    out << o.ks[i];
    for (double v : values[i]) out << '\t' << num(v);
    out << '\n';
  }
  return out.str();
}

std::string CritvalTable::to_json() const {
  const auto& o = options;
  json j;
  j["method"] = o.null.method;
  j["reps"] = o.null.reps;
  j["seed"] = o.null.seed;
  if (o.null.method == "finite") {
    j["n"] = o.n;
  } else {
    j["grid"] = o.null.grid;
  }
  j["order"] = o.order;
  if (o.null.method == "finite") j["points"] = to_string(o.points);
  json rows = json::array();
  for (std::size_t i = 0; i < o.ks.size(); ++i) {
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t a = 0; a < o.alphas.size(); ++a) {
      pairs.emplace_back(o.alphas[a], values[i][a]);
    }
    rows.push_back({{"k", o.ks[i]}, {"critical_values", rounded_pairs(pairs)}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

CritvalTable cmd_critvals(const CritvalOptions& options,
                          std::vector<std::string>* notices) {
  check_null_options(options.null);
  check_alphas(options.alphas);
  if (!options.null.null_file.empty()) {
    throw std::invalid_argument("critvals does not take a null file");
  }
  if (options.ks.empty()) throw std::invalid_argument("no k values given");
  if (options.n < 1) throw std::invalid_argument("--n must be >= 1");
  CritvalTable table;
  table.options = options;
  const NullOptions& o = options.null;
  for (std::size_t k : options.ks) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    const OrderSpec order = OrderSpec::parse(options.order, k);
    const std::vector<double> weights(k, 1.0 / static_cast<double>(k));
    NullDistribution null;
    if (o.method == "finite") {
      const std::vector<std::size_t> sizes(k, options.n);
      const auto want = descriptor(NullMethod::kFiniteSample, k, weights, o, 0,
                                   order.to_string(), sizes,
                                   tn_name(options.points));
      null = obtain_null(want, o, [&] {
        return simulate_null_finite(sizes, order, sim_options(o),
                                    options.points);
      }, notices);
    } else {
      const auto want = descriptor(NullMethod::kLimitK, k, weights, o, o.grid,
                                   order.to_string(), {});
      null = obtain_null(want, o, [&] {
        return simulate_limit_k(weights, order, o.grid, sim_options(o));
      }, notices);
    }
    auto& row = table.values.emplace_back();
    for (double a : options.alphas) row.push_back(critical_value(null, a));
  }
  return table;
}

std::vector<PowerRow> cmd_power(const PowerOptions& options,
                                std::vector<std::string>* notices) {
  auto in = open_input(options.config_path);
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed config: " + std::string(e.what()));
  }
  const json* list = &config;
  if (config.is_object()) {
    if (!config.contains("scenarios")) {
      config_error("config", "expected a 'scenarios' array");
    }
    list = &config["scenarios"];
  }
  if (!list->is_array() || list->empty()) {
    config_error("scenarios", "must be a nonempty array");
  }

  std::vector<PowerRow> rows;
  for (std::size_t i = 0; i < list->size(); ++i) {
    std::optional<double> crit_tn, crit_sn;
    Scenario sc;
    try {
      sc = parse_scenario((*list)[i], "scenarios[" + std::to_string(i) + "]",
                          &crit_tn, &crit_sn);
    } catch (const json::exception& e) {
      config_error("scenarios[" + std::to_string(i) + "]", e.what());
    }
    const std::size_t k = sc.k();
    const OrderSpec order = sc.order.value_or(OrderSpec::simple(k));
    if (sc.run_tn && !crit_tn) {
      NullOptions o;
      o.reps = options.crit_reps;
      o.seed = options.crit_seed;
      o.workers = options.workers;
      o.cache_dir = options.cache_dir;
      const std::vector<std::size_t> sizes(k, options.crit_n);
      const std::vector<double> weights(k, 1.0 / static_cast<double>(k));
      const auto want = descriptor(NullMethod::kFiniteSample, k, weights, o, 0,
                                   order.to_string(), sizes,
                                   tn_name(sc.points));
      const NullDistribution null = obtain_null(want, o, [&] {
        return simulate_null_finite(sizes, order, sim_options(o), sc.points);
      }, notices);
      crit_tn = critical_value(null, sc.alpha);
    }
    if (sc.run_sn && !crit_sn) crit_sn = sn_critical(sc.alpha, k);
    const PowerResult res = run_power(sc, crit_tn.value_or(0.0),
                                      crit_sn.value_or(0.0), options.workers);
    PowerRow row;
    row.name = sc.name;
    row.k = k;
    row.n_vec = sc.n_vec;
    row.reps = sc.reps;
    row.alpha = sc.alpha;
    row.seed = sc.seed;
    if (res.tn) {
      row.tn_rate = res.tn->rate();
      row.tn_se = res.tn->standard_error();
      row.tn_crit = res.tn->critical_value;
    }
    if (res.sn) {
      row.sn_rate = res.sn->rate();
      row.sn_se = res.sn->standard_error();
      row.sn_crit = res.sn->critical_value;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string power_rows_to_text(const std::vector<PowerRow>& rows) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? num(*v) : std::string("NA");
  };
  std::ostringstream out;
  out << "scenario,k,n,reps,alpha,tn_rate,tn_se,tn_crit,sn_rate,sn_se,sn_crit,"
         "seed\n";
  for (const auto& r : rows) {
    std::vector<std::string> sizes;
    for (auto n : r.n_vec) sizes.push_back(std::to_string(n));
    out << r.name << ',' << r.k << ',' << join(sizes, ";") << ',' << r.reps
        << ',' << num(r.alpha) << ',' << opt(r.tn_rate) << ',' << opt(r.tn_se)
        << ',' << opt(r.tn_crit) << ',' << opt(r.sn_rate) << ','
        << opt(r.sn_se) << ',' << opt(r.sn_crit) << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string power_rows_to_json(const std::vector<PowerRow>& rows) {
  const auto opt = [](const std::optional<double>& v) -> json {
    return v ? json(rounded(*v)) : json(nullptr);
  };
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"scenario", r.name},
                   {"k", r.k},
                   {"n", r.n_vec},
                   {"reps", r.reps},
                   {"alpha", r.alpha},
                   {"tn_rate", opt(r.tn_rate)},
                   {"tn_se", opt(r.tn_se)},
                   {"tn_crit", opt(r.tn_crit)},
                   {"sn_rate", opt(r.sn_rate)},
                   {"sn_se", opt(r.sn_se)},
                   {"sn_crit", opt(r.sn_crit)},
                   {"seed", r.seed}});
  }
  return out.dump(2) + "\n";
}

std::string cmd_survcurves(const SurvcurveOptions& options,
                           std::vector<std::string>* notices) {
  const GroupedData raw = read_grouped_csv_file(options.data_path);
  const GroupedData chosen = select_groups(raw, options.groups, notices);
  std::ostringstream out;
  out << "group,x,survival\n";
  for (std::size_t j = 0; j < chosen.labels.size(); ++j) {
    const Sample sample(chosen.values[j], chosen.labels[j]);
    const auto v = sample.values();
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
      const double remaining = static_cast<double>(v.size() - (i + 1));
      out << chosen.labels[j] << ',' << internal::format_exact(v[i]) << ','
          << internal::format_exact(remaining / n) << '\n';
    }
  }
  return out.str();
}

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  for (std::string_view item : internal::split(text, ',')) {
    const auto v = internal::parse_double(item);
    if (!v || !(*v > 0.0 && *v < 1.0)) {
      throw std::invalid_argument("alpha '" + std::string(item) +
                                  "' is not a number in (0, 1)");
    }
    out.push_back(*v);
  }
  return out;
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> out;
  const auto bad = [&] {
    return std::invalid_argument("cannot parse k list '" + text + "'");
  };
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = internal::parse_int<std::size_t>(text.substr(0, dots));
    const auto hi = internal::parse_int<std::size_t>(text.substr(dots + 2));
    if (!lo || !hi || *lo > *hi) throw bad();
    for (std::size_t k = *lo; k <= *hi; ++k) out.push_back(k);
    return out;
  }
  for (std::string_view item : internal::split(text, ',')) {
    const auto v = internal::parse_int<std::size_t>(item);
    if (!v) throw bad();
    out.push_back(*v);
  }
  return out;
}

}  // namespace stochorder::cli
