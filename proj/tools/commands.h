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

#ifndef LDPMIN_TOOLS_COMMANDS_H_
#define LDPMIN_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ldpmin/protocol.h"

namespace ldpmin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

// Largest n accepted by `experiment` unless --allow-large-n is given.
inline constexpr int64_t kDefaultMaxN = int64_t{1} << 16;

struct SimulateOptions {
  std::optional<int64_t> n;
  std::string epsilon = "1";
  std::optional<int> depth;
  std::optional<double> gamma;
  std::optional<std::string> param_mode;
  double alpha0 = 1.0;
  std::string model = "uniform";
  double alpha = 1.0;
  double beta = 1.0;
  double x_min = -1.0;
  double delta = 2.0;
  std::optional<double> mu;
  double sigma = 1.0;
  std::optional<double> x_max;
  std::vector<double> values;
  std::optional<std::string> data_path;
  double lo = -1.0;
  double hi = 1.0;
  std::string setting = "fixed";
  std::string target = "min";
  std::string mechanism = "binary_search";
  uint64_t seed = 1;
  // User i draws from SeededStream(client_seed_base + i), as a networked
  // client started with --seed client_seed_base + i would.
  std::optional<uint64_t> client_seed_base;
  std::optional<std::string> out;
};

struct ExperimentOptions {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> guideline_out;
  std::optional<std::string> detail_out;
  std::optional<double> guideline_alpha;
  std::optional<int> reps;
  std::optional<int> threads;
  bool allow_large_n = false;
};

struct FitOptions {
  std::string csv_path;
  std::optional<std::string> mechanism;
  std::optional<std::string> epsilon;
};

struct ServeOptions {
  std::string bind = "127.0.0.1:7878";
  int64_t clients = 1;
  std::string epsilon = "1";
  int depth = 1;
  double gamma = 0.0;
  int timeout_ms = 30000;
  std::optional<std::string> transcript_out;
  std::optional<std::string> port_file;
};

struct ClientCommandOptions {
  std::string connect = "127.0.0.1:7878";
  double value = 0.0;
  uint64_t seed = 0;
  std::string id = "user";
  int timeout_ms = 60000;
};

int RunSimulate(const SimulateOptions& opts, std::ostream& out,
                std::ostream& err);
int RunExperimentCommand(const ExperimentOptions& opts, std::ostream& out,
                         std::ostream& err);
int RunCompareCommand(const ExperimentOptions& opts, std::ostream& out,
                      std::ostream& err);
int RunFit(const FitOptions& opts, std::ostream& out, std::ostream& err);
int RunServe(const ServeOptions& opts, std::ostream& out, std::ostream& err);
int RunClientCommand(const ClientCommandOptions& opts, std::ostream& out,
                     std::ostream& err);

// JSON lines: one object per round (round, tau, sum_z, phi, branch), then a
// summary object carrying the estimate.
void WriteTranscriptJsonl(std::ostream& out, const Transcript& transcript,
                          std::optional<uint64_t> seed);

}  // namespace ldpmin::cli

#endif  // LDPMIN_TOOLS_COMMANDS_H_
