//
// Copyright 2026 The ldpmin Authors.
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
//

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
CliRun Cli(const std::string& args) {
  const std::string cmd = std::string(LDPMIN_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    r.out.append(buf, got);
  }
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string LastLine(const std::string& s) {
  std::string trimmed = s;
  while (!trimmed.empty() && trimmed.back() == '\n') trimmed.pop_back();
  return trimmed.substr(trimmed.rfind('\n') + 1);
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldpmin_cli_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, SimulateHandTrace) {
  const CliRun r =
      Cli("simulate --n 1 --values 0.5 --epsilon inf --depth 3 --seed 1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_THAT(LastLine(r.out), HasSubstr("\"estimate\":0.375"));
  EXPECT_THAT(r.out, HasSubstr("\"round\":1"));
  EXPECT_THAT(r.out, HasSubstr("\"branch\":\"Left\""));
}

TEST_F(CliTest, SimulateDeterministic) {
  const std::string args =
      "simulate --n 2000 --epsilon 2 --model beta --alpha 2 --x-min -0.4 "
      "--delta 0.5 --setting iid --seed 9";
  const CliRun a = Cli(args), b = Cli(args);
  ASSERT_EQ(a.exit_code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(Cli(args + "0").out, a.out);
}

TEST_F(CliTest, SimulateWritesOutFile) {
  const fs::path out = dir_ / "t.jsonl";
  const CliRun r = Cli("simulate --n 100 --epsilon 1 --param-mode unknown_alpha "
                    "--out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_THAT(ReadFile(out), HasSubstr("\"estimate\""));
}

TEST_F(CliTest, SimulateMaxAndMechanisms) {
  CliRun r = Cli("simulate --n 3 --values 0.1,0.6,-0.2 --epsilon inf --depth 12 "
              "--target max --mechanism nonprivate");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_THAT(LastLine(r.out), HasSubstr("\"target\":\"max\""));
  r = Cli("simulate --n 100 --epsilon 1 --mechanism laplace_baseline");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_THAT(r.out, HasSubstr("\"estimate\""));
}

TEST_F(CliTest, SimulateUsageErrors) {
  EXPECT_EQ(Cli("simulate --epsilon 1").exit_code, 2);
  EXPECT_EQ(Cli("simulate --n 10 --gamma 0.1 --depth 3 --param-mode known_alpha")
                .exit_code,
            2);
  EXPECT_EQ(Cli("simulate --n 10 --gamma 0.1").exit_code, 2);
  EXPECT_EQ(Cli("simulate --n 10 --model beta --alpha -1").exit_code, 2);
  EXPECT_EQ(Cli("simulate --n 10 --epsilon zero").exit_code, 2);
  EXPECT_EQ(Cli("simulate --n 3 --values 0.1,0.2").exit_code, 2);
  EXPECT_EQ(Cli("bogus").exit_code, 2);
}

TEST_F(CliTest, SimulateFromCsv) {
  const fs::path csv = Write("ages.csv", "age\n30\n45\n12\n80\n");
  const CliRun r = Cli("simulate --n 4 --data " + csv.string() +
                    " --lo 0 --hi 150 --epsilon inf --depth 10");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::string last = LastLine(r.out);
  const double est = std::stod(last.substr(last.find("\"estimate\":") + 11));
  EXPECT_NEAR(est, 12.0 / 75.0 - 1.0, std::ldexp(1.0, -10));
}

TEST_F(CliTest, ExperimentWritesTables) {
  const fs::path cfg = Write("e.cfg",
                             "model = uniform\ndelta = 0.5\n"
                             "n_grid = 256, 512\nepsilon_grid = 1, 4\n"
                             "reps = 4\nseed = 3\n"
                             "mechanism = binary_search, nonprivate\n");
  const fs::path csv = dir_ / "out.csv";
  const std::string args = "experiment --config " + cfg.string() + " --out " +
                           csv.string() + " --guideline-out " +
                           (dir_ / "g.csv").string() + " --detail-out " +
                           (dir_ / "d.csv").string();
  CliRun r = Cli(args);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::string first = ReadFile(csv);
  EXPECT_THAT(first, StartsWith("n,epsilon,mechanism,param_mode,x_min,"
                                "mean_abs_err,q05,q95,reps,seed\n"));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 1 + 2 * 2 * 2);
  EXPECT_THAT(ReadFile(dir_ / "g.csv"), StartsWith("n,epsilon,guideline_value\n"));
  EXPECT_THAT(ReadFile(fs::path(csv.string() + ".meta.json")),
              HasSubstr("worst x_min"));
  r = Cli(args);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(ReadFile(csv), first);
}

TEST_F(CliTest, ExperimentConfigErrors) {
  const fs::path empty = Write("e.cfg", "n_grid =\nepsilon_grid = 1\n");
  CliRun r = Cli("experiment --config " + empty.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_THAT(r.out, HasSubstr("config line 1"));
  const fs::path big = Write("b.cfg", "n_grid = 2^17\nepsilon_grid = 1\n");
  r = Cli("experiment --config " + big.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_THAT(r.out, HasSubstr("--allow-large-n"));
  EXPECT_EQ(Cli("experiment --config " + (dir_ / "nope.cfg").string()).exit_code,
            2);
}

TEST_F(CliTest, CompareTable) {
  const fs::path cfg = Write("c.cfg",
                             "delta = 0.3\nn_grid = 256\nepsilon_grid = 1\n"
                             "reps = 3\n");
  const CliRun r = Cli("compare --config " + cfg.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_THAT(r.out, StartsWith("n,epsilon,binary_search_err,baseline_err,ratio\n256,1,"));
}

TEST_F(CliTest, FitPowerLaw) {
  std::string body = "n,mean_abs_err\n";
  for (int k = 6; k <= 16; ++k) {
    const double n = std::ldexp(1.0, k);
    std::ostringstream line;
    line.precision(17);
    line << n << "," << 1 / std::sqrt(n) << "\n";
    body += line.str();
  }
  const CliRun r = Cli("fit --csv " + Write("p.csv", body).string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const size_t at = r.out.find("alpha_hat=");
  ASSERT_NE(at, std::string::npos);
  EXPECT_NEAR(std::stod(r.out.substr(at + 10)), 1.0, 1e-6);
}

TEST_F(CliTest, FitFailures) {
  CliRun r = Cli("fit --csv " +
              Write("m.csv", "n,mean_abs_err\n10,0.5\n20,x\n40,0.2\n").string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_THAT(r.out, HasSubstr("row 3"));
  r = Cli("fit --csv " +
          Write("s.csv", "n,mean_abs_err\n10,0.5\n20,0.4\n").string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_THAT(r.out, HasSubstr("at least 3"));
  r = Cli("fit --csv " +
          Write("u.csv", "n,mean_abs_err\n10,0.1\n100,0.3\n1000,0.9\n").string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_THAT(r.out, HasSubstr("A <= 0"));
}

TEST_F(CliTest, ClientRejectsValueBeforeConnecting) {
  const CliRun r = Cli("client --connect 127.0.0.1:1 --value 1.5");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_THAT(r.out, HasSubstr("outside [-1, 1]"));
}

TEST_F(CliTest, ServeTimesOutWithMissingClient) {
  const fs::path port_file = dir_ / "port";
  std::string server_out;
  int server_code = -1;
  std::thread server([&] {
    const CliRun r = Cli("serve --bind 127.0.0.1:0 --clients 2 --epsilon 1 "
                      "--depth 3 --gamma 0.1 --timeout-ms 400 --port-file " +
                      port_file.string());
    server_out = r.out;
    server_code = r.exit_code;
  });
  std::string port;
  for (int i = 0; i < 200 && port.empty(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
    port = ReadFile(port_file);
  }
  ASSERT_FALSE(port.empty());
  port.erase(port.find_last_not_of("\n") + 1);
  const CliRun client = Cli("client --connect 127.0.0.1:" + port + " --value 0.2");
  server.join();
  EXPECT_EQ(client.exit_code, 3);
  EXPECT_THAT(client.out, HasSubstr("timeout"));
  EXPECT_EQ(server_code, 3);
  EXPECT_THAT(server_out, HasSubstr("timeout"));
}

TEST_F(CliTest, LoopbackDemoScript) {
  const std::string cmd = std::string(LDPMIN_SOURCE_DIR) +
                          "/scripts/loopback_demo.sh " + LDPMIN_CLI_PATH +
                          " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[1024];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int status = ::pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 0) << out;
  EXPECT_THAT(out, HasSubstr("MATCH"));
}

}  // namespace
