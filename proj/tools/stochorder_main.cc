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

// stochorder: empirical likelihood tests for stochastic ordering.
//
//   stochorder k-sample    --data d.csv --groups A,B,C [--sn] [--json]
//   stochorder one-sample  --data d.csv --f0 uniform:a=0,b=1 [--star]
//   stochorder critvals    --k 2..5 --alphas 0.01,0.05,0.10 --reps 100000
//   stochorder power       --config scenarios.json
//   stochorder survcurves  --data d.csv [--output curves.csv]
//
// Exit codes: 0 success, 2 input error, 3 invalid arguments.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochorder/commands.h"

namespace {

namespace cli = stochorder::cli;

constexpr int kInputError = 2;
constexpr int kArgumentError = 3;

void add_null_flags(CLI::App* cmd, cli::NullOptions* o, bool with_method) {
  if (with_method) {
    cmd->add_option("--null-method", o->method,
                    "Null distribution: finite or limit")
        ->check(CLI::IsMember({"finite", "limit"}));
  }
  cmd->add_option("--reps", o->reps, "Monte Carlo replications");
  cmd->add_option("--grid", o->grid, "Grid size for the limit method");
  cmd->add_option("--seed", o->seed, "Master seed");
  cmd->add_option("--threads", o->workers, "Worker threads (0: all cores)");
  cmd->add_option("--cache-dir", o->cache_dir,
                  "Directory for cached null distributions");
}

void print_notices(const std::vector<std::string>& notices) {
  for (const auto& n : notices) std::cerr << "notice: " << n << '\n';
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw cli::InputError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  const auto kPointsMap = CLI::CheckedTransformer(
      std::map<std::string, stochorder::PooledPoints>{
          {"all", stochorder::PooledPoints::kAll},
          {"interior", stochorder::PooledPoints::kInterior}})
          .description("");
  CLI::App app{"Empirical likelihood tests for stochastic ordering"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string output;
  std::string alphas_text = "0.01,0.05,0.10";

  cli::KSampleOptions ks;
  auto* k_cmd = app.add_subcommand("k-sample", "Test F_1 > F_2 > ... > F_k");
  k_cmd->add_option("--data", ks.data_path, "CSV with header group,value")
      ->required();
  k_cmd->add_option("--groups", ks.groups,
                    "Hypothesis order, stochastically largest first; "
                    "join labels with '+' to pool groups")
      ->delimiter(',');
  k_cmd->add_option("--order", ks.order,
                    "simple | tree:root=i | umbrella:peak=i | general:i<=j,...");
  k_cmd->add_flag("--sn", ks.with_sn, "Also report the sequential KS test Sn");
  k_cmd->add_option("--points", ks.points,
                    "Pooled points entering Tn: all | interior")
      ->transform(kPointsMap)
      ->option_text("all|interior");
  k_cmd->add_option("--alphas", alphas_text, "Levels for critical values");
  k_cmd->add_option("--null-file", ks.null.null_file,
                    "Use this precomputed null distribution");
  add_null_flags(k_cmd, &ks.null, true);

  cli::OneSampleOptions os;
  os.null.method = "limit";
  auto* o_cmd = app.add_subcommand("one-sample", "Test F > F0 for a given F0");
  o_cmd->add_option("--data", os.data_path, "CSV with header value")
      ->required();
  o_cmd->add_option("--f0", os.f0, "e.g. uniform:a=0,b=1 or exponential:rate=1")
      ->required();
  o_cmd->add_flag("--star", os.star, "Also report Tn* (ecdf integrator)");
  o_cmd->add_option("--alphas", alphas_text, "Levels for critical values");
  o_cmd->add_option("--null-file", os.null.null_file,
                    "Use this precomputed null distribution");
  add_null_flags(o_cmd, &os.null, true);

  cli::CritvalOptions cv;
  cv.null.reps = 100000;
  std::string k_text = "2..5";
  auto* c_cmd = app.add_subcommand("critvals", "Tabulate critical values of Tn");
  c_cmd->add_option("--k", k_text, "Group counts, e.g. 2..5 or 2,3");
  c_cmd->add_option("--alphas", alphas_text, "Significance levels");
  c_cmd->add_option("--n", cv.n, "Per-group sample size (finite method)");
  c_cmd->add_option("--order", cv.order, "Order kind (applied to every k)");
  c_cmd->add_option("--points", cv.points,
                    "Pooled points entering Tn: all | interior")
      ->transform(kPointsMap)
      ->option_text("all|interior");
  c_cmd->add_option("--method", cv.null.method, "finite or limit")
      ->check(CLI::IsMember({"finite", "limit"}));
  add_null_flags(c_cmd, &cv.null, false);

  cli::PowerOptions po;
  auto* p_cmd = app.add_subcommand("power", "Run power-study scenarios");
  p_cmd->add_option("--config", po.config_path, "JSON scenario file")
      ->required();
  p_cmd->add_option("--crit-reps", po.crit_reps,
                    "Replications for Tn critical values not given in config");
  p_cmd->add_option("--crit-n", po.crit_n, "Per-group size for those values");
  p_cmd->add_option("--crit-seed", po.crit_seed, "Seed for those values");
  p_cmd->add_option("--cache-dir", po.cache_dir,
                    "Directory for cached null distributions");
  p_cmd->add_option("--threads", po.workers, "Worker threads (0: all cores)");

  cli::SurvcurveOptions sv;
  auto* s_cmd = app.add_subcommand(
      "survcurves", "Export empirical survival step coordinates");
  s_cmd->add_option("--data", sv.data_path, "CSV with header group,value")
      ->required();
  s_cmd->add_option("--groups", sv.groups, "Groups to export, in order")
      ->delimiter(',');

  for (auto* cmd : {k_cmd, o_cmd, c_cmd, p_cmd}) {
    cmd->add_flag("--json", as_json, "Machine-readable output");
  }
  for (auto* cmd : {k_cmd, o_cmd, c_cmd, p_cmd, s_cmd}) {
    cmd->add_option("--output", output, "Write the report to this file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kArgumentError;
  }

  std::vector<std::string> notices;
  try {
    if (k_cmd->parsed()) {
      ks.alphas = cli::parse_alphas(alphas_text);
      const auto report = cli::cmd_k_sample(ks, &notices);
      print_notices(notices);
      emit(as_json ? report.to_json() : report.to_text(), output);
    } else if (o_cmd->parsed()) {
      os.alphas = cli::parse_alphas(alphas_text);
      const auto report = cli::cmd_one_sample(os, &notices);
      print_notices(notices);
      emit(as_json ? report.to_json() : report.to_text(), output);
    } else if (c_cmd->parsed()) {
      cv.alphas = cli::parse_alphas(alphas_text);
      cv.ks = cli::parse_k_list(k_text);
      const auto table = cli::cmd_critvals(cv, &notices);
      print_notices(notices);
      emit(as_json ? table.to_json() : table.to_text(), output);
    } else if (p_cmd->parsed()) {
      const auto rows = cli::cmd_power(po, &notices);
      print_notices(notices);
      emit(as_json ? cli::power_rows_to_json(rows)
                   : cli::power_rows_to_text(rows),
           output);
    } else if (s_cmd->parsed()) {
      const auto csv = cli::cmd_survcurves(sv, &notices);
      print_notices(notices);
      emit(csv, output);
    }
  } catch (const std::logic_error& e) {
    print_notices(notices);
    std::cerr << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::exception& e) {
    print_notices(notices);
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
