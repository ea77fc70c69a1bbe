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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace stochorder::cli {
namespace {

namespace fs = std::filesystem;

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stochorder_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string Read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Runs the executable; returns its exit status.
  int Run(const std::string& args) {
    const std::string cmd = std::string(STOCHORDER_CLI_PATH) + " " + args +
                            " > " + (dir_ / "stdout").string() + " 2> " +
                            (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

const char kThreeGroups[] =
    "group,value\n"
    "# comment\n"
    "A,5.1\nA,6.3\nA,4.8\nA,7.0\nA,5.5\n"
    "B,3.2\nB,4.1\nB,2.9\nB,5.0\n"
    "\n"
    "C,1.0\nC,2.2\nC,0.5\nC,1.7\nC,2.0\nC,1.1\n";

TEST_F(CommandsTest, ReadsGroupedCsv) {
  std::istringstream in("\xEF\xBB\xBFgroup,value\nx,1\ny,2\nx,3\n");
  const GroupedData d = read_grouped_csv(in, "mem");
  EXPECT_EQ(d.labels, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(d.values[0], (std::vector<double>{1, 3}));
}

TEST_F(CommandsTest, GroupedCsvErrorsNameTheLine) {
  std::istringstream bad_value("group,value\nx,1\nx,abc\n");
  try {
    read_grouped_csv(bad_value, "data.csv");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("data.csv:3"), std::string::npos);
  }
  std::istringstream bad_header("grp,val\nx,1\n");
  EXPECT_THROW(read_grouped_csv(bad_header, "h"), InputError);
  std::istringstream nan_value("group,value\nx,nan\n");
  EXPECT_THROW(read_grouped_csv(nan_value, "n"), InputError);
}

TEST_F(CommandsTest, SelectGroupsPoolsAndReorders) {
  std::istringstream in(kThreeGroups);
  const GroupedData d = read_grouped_csv(in, "mem");
  std::vector<std::string> notices;
  const GroupedData s = select_groups(d, {"C", "A+B"}, &notices);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"C", "A+B"}));
  EXPECT_EQ(s.values[1].size(), 9u);
  EXPECT_TRUE(notices.empty());
  select_groups(d, {}, &notices);
  EXPECT_EQ(notices.size(), 1u);
  EXPECT_THROW(select_groups(d, {"A", "Z"}, &notices), InputError);
}

TEST_F(CommandsTest, KSampleReportIsDeterministic) {
  KSampleOptions o;
  o.data_path = Write("d.csv", kThreeGroups);
  o.groups = {"A", "B", "C"};
  o.with_sn = true;
  o.null.reps = 500;
  o.null.workers = 1;
  std::vector<std::string> notices;
  const TestReport a = cmd_k_sample(o, &notices);
  o.null.workers = 3;
  const TestReport b = cmd_k_sample(o, &notices);
  EXPECT_EQ(a.to_text(), b.to_text());
  EXPECT_EQ(a.to_json(), b.to_json());
  ASSERT_EQ(a.statistics.size(), 2u);
  EXPECT_EQ(a.statistics[0].name, "Tn");
  EXPECT_GT(a.statistics[0].value, 0.0);
  EXPECT_LT(a.statistics[0].p_value, 0.05);
  const auto j = nlohmann::json::parse(a.to_json());
  EXPECT_EQ(j["k"], 3);
  EXPECT_EQ(j["statistics"][1]["p_value_basis"], "asymptotic");
}

TEST_F(CommandsTest, InteriorPointsOption) {
  KSampleOptions o;
  o.data_path = Write("d.csv", kThreeGroups);
  o.groups = {"A", "B", "C"};
  o.null.reps = 300;
  o.null.workers = 1;
  o.null.cache_dir = (dir_ / "cache").string();
  std::vector<std::string> notices;
  const TestReport all = cmd_k_sample(o, &notices);
  o.points = PooledPoints::kInterior;
  const TestReport in = cmd_k_sample(o, &notices);
  EXPECT_EQ(all.points, "all");
  EXPECT_EQ(in.points, "interior");
  EXPECT_LT(in.statistics[0].value, all.statistics[0].value);
  EXPECT_NE(in.to_text().find("points: interior"), std::string::npos);
  // The two nulls are cached separately.
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e :
       fs::directory_iterator(o.null.cache_dir)) {
    ++files;
  }
  EXPECT_EQ(files, 2u);
  const std::string data = Write("e.csv", kThreeGroups);
  EXPECT_EQ(Run("k-sample --data " + data + " --points interior --reps 50"), 0);
  EXPECT_EQ(Run("k-sample --data " + data + " --points edges"), 3);
}

TEST_F(CommandsTest, NullCacheIsReused) {
  KSampleOptions o;
  o.data_path = Write("d.csv", kThreeGroups);
  o.groups = {"A", "C"};
  o.null.reps = 200;
  o.null.method = "limit";
  o.null.grid = 100;
  o.null.cache_dir = (dir_ / "cache").string();
  std::vector<std::string> notices;
  const TestReport first = cmd_k_sample(o, &notices);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(o.null.cache_dir)) {
    ++files;
    o.null.null_file = e.path().string();
  }
  EXPECT_EQ(files, 1u);
  const TestReport second = cmd_k_sample(o, &notices);
  EXPECT_EQ(first.to_text(), second.to_text());
}

TEST_F(CommandsTest, OneSampleFiniteAndLimit) {
  OneSampleOptions o;
  o.data_path = Write("v.csv", "value\n0.9\n0.85\n0.8\n0.7\n0.95\n0.6\n");
  o.f0 = "uniform:a=0,b=1";
  o.star = true;
  o.null.method = "limit";
  o.null.reps = 300;
  o.null.grid = 200;
  std::vector<std::string> notices;
  const TestReport lim = cmd_one_sample(o, &notices);
  ASSERT_EQ(lim.statistics.size(), 2u);
  EXPECT_EQ(lim.statistics[1].name, "Tn*");
  o.null.method = "finite";
  const TestReport fin = cmd_one_sample(o, &notices);
  EXPECT_EQ(fin.statistics[0].value, lim.statistics[0].value);
  EXPECT_LT(fin.statistics[0].p_value, 0.2);
}

TEST_F(CommandsTest, SurvivalCurvesRoundTrip) {
  SurvcurveOptions o;
  o.data_path = Write("d.csv", "group,value\na,2\na,1\na,2\nb,0.1\n");
  std::vector<std::string> notices;
  const std::string csv = cmd_survcurves(o, &notices);
  EXPECT_EQ(csv, "group,x,survival\na,1,0.6666666666666666\na,2,0\nb,0.1,0\n");
}

TEST_F(CommandsTest, PowerConfig) {
  PowerOptions o;
  o.config_path = Write("p.json", R"({"scenarios": [
    {"name": "shift", "n": [15, 15],
     "distributions": ["normal:mean=1,variance=1", "normal:mean=0,variance=1"],
     "reps": 200, "alpha": 0.05, "crit_tn": 1.821, "seed": 3,
     "points": "interior"}]})");
  std::vector<std::string> notices;
  const auto rows = cmd_power(o, &notices);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_GT(*rows[0].tn_rate, 0.5);
  EXPECT_NEAR(*rows[0].sn_crit, 1.2238734, 1e-6);
  const std::string text = power_rows_to_text(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "scenario,k,n,reps,alpha,tn_rate,tn_se,tn_crit,sn_rate,sn_se,"
            "sn_crit,seed");
  o.config_path = Write("pts.json", R"({"scenarios": [{"n": [5, 5],
    "distributions": ["uniform:a=0,b=1", "uniform:a=0,b=1"],
    "points": "edges"}]})");
  EXPECT_THROW(cmd_power(o, &notices), InputError);
  o.config_path = Write("bad.json", R"({"scenarios": [{"name": "x", "n": 5}]})");
  try {
    cmd_power(o, &notices);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("scenarios[0]"), std::string::npos);
  }
}

TEST_F(CommandsTest, ParsesListArguments) {
  EXPECT_EQ(parse_k_list("2..5"), (std::vector<std::size_t>{2, 3, 4, 5}));
  EXPECT_EQ(parse_k_list("3,2"), (std::vector<std::size_t>{3, 2}));
  EXPECT_THROW(parse_k_list("5..2"), std::invalid_argument);
  EXPECT_EQ(parse_alphas("0.01,0.1"), (std::vector<double>{0.01, 0.1}));
  EXPECT_THROW(parse_alphas("0.01,2"), std::invalid_argument);
}

TEST_F(CommandsTest, ExecutableExitCodes) {
  const std::string data = Write("d.csv", kThreeGroups);
  EXPECT_EQ(Run("k-sample --data " + data + " --groups A,B --reps 100"), 0);
  EXPECT_NE(Read((dir_ / "stdout").string()).find("statistic Tn"),
            std::string::npos);
  EXPECT_EQ(Run("k-sample --data " + (dir_ / "missing.csv").string()), 2);
  EXPECT_EQ(Run("k-sample --data " + data + " --groups A,Q"), 2);
  EXPECT_EQ(Run("k-sample --data " + data + " --order zigzag"), 3);
  EXPECT_EQ(Run("k-sample --data " + data + " --alphas 1.5"), 3);
  EXPECT_EQ(Run("k-sample"), 3);
  EXPECT_EQ(Run("no-such-command"), 3);
  EXPECT_EQ(Run("survcurves --data " + data + " --output " +
                (dir_ / "s.csv").string()),
            0);
  EXPECT_EQ(Read((dir_ / "s.csv").string()).substr(0, 17), "group,x,survival\n");
}

TEST_F(CommandsTest, ExecutableOutputDoesNotDependOnThreads) {
  const std::string data = Write("d.csv", kThreeGroups);
  const std::string base =
      "k-sample --data " + data + " --groups A,B,C --sn --json --reps 300";
  ASSERT_EQ(Run(base + " --threads 1"), 0);
  const std::string one = Read((dir_ / "stdout").string());
  ASSERT_EQ(Run(base + " --threads 4"), 0);
  EXPECT_EQ(Read((dir_ / "stdout").string()), one);
}

}  // namespace
}  // namespace stochorder::cli
