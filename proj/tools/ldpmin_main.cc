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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using ldpmin::cli::ClientCommandOptions;
using ldpmin::cli::ExperimentOptions;
using ldpmin::cli::FitOptions;
using ldpmin::cli::ServeOptions;
using ldpmin::cli::SimulateOptions;

void AddExperimentFlags(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--config", o.config_path, "Experiment config file")
      ->required();
  cmd->add_option("--out", o.out, "Output CSV (default stdout)");
  cmd->add_option("--reps", o.reps, "Override the repetition count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--allow-large-n", o.allow_large_n,
                "Permit n above 65536");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally private minimum finding"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one protocol");
  simulate->add_option("--n", sim.n, "Number of users");
  simulate->add_option("--epsilon", sim.epsilon, "Privacy budget or 'inf'");
  simulate->add_option("--depth", sim.depth, "Number of rounds")
      ->check(CLI::Range(1, 52));
  simulate->add_option("--gamma", sim.gamma, "Branching threshold");
  simulate->add_option("--param-mode", sim.param_mode,
                       "known_alpha | unknown_alpha | lower_alpha | "
                       "unknown_alpha_preset");
  simulate->add_option("--alpha0", sim.alpha0, "Lower bound on alpha");
  simulate->add_option("--model", sim.model, "uniform | beta | truncnormal");
  simulate->add_option("--alpha", sim.alpha, "Beta shape alpha");
  simulate->add_option("--beta", sim.beta, "Beta shape beta");
  simulate->add_option("--x-min", sim.x_min, "Left end of the support");
  simulate->add_option("--delta", sim.delta, "Support width");
  simulate->add_option("--mu", sim.mu, "Truncated normal mean");
  simulate->add_option("--sigma", sim.sigma, "Truncated normal scale");
  simulate->add_option("--x-max", sim.x_max, "Truncated normal upper end");
  simulate->add_option("--values", sim.values, "Explicit user values")
      ->delimiter(',');
  simulate->add_option("--data", sim.data_path, "CSV with one value per row");
  simulate->add_option("--lo", sim.lo, "Raw-data lower bound for --data");
  simulate->add_option("--hi", sim.hi, "Raw-data upper bound for --data");
  simulate->add_option("--setting", sim.setting, "fixed | iid");
  simulate->add_option("--target", sim.target, "min | max");
  simulate->add_option("--mechanism", sim.mechanism,
                       "binary_search | nonprivate | laplace_baseline");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--client-seed-base", sim.client_seed_base,
                       "Seed user i with base + i, as networked clients");
  simulate->add_option("--out", sim.out, "Transcript file (default stdout)");

  ExperimentOptions exp;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run an error-versus-n sweep");
  AddExperimentFlags(experiment, exp);
  experiment->add_option("--guideline-out", exp.guideline_out,
                         "Guideline curve CSV");
  experiment->add_option("--guideline-alpha", exp.guideline_alpha,
                         "Alpha used for the guideline curve");
  experiment->add_option("--detail-out", exp.detail_out,
                         "Per-x_min detail CSV");

  ExperimentOptions cmp;
  CLI::App* compare = app.add_subcommand(
      "compare", "Binary search against the Laplace baseline");
  AddExperimentFlags(compare, cmp);

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit the empirical rate");
  fit_cmd->add_option("--csv", fit.csv_path, "Experiment CSV")->required();
  fit_cmd->add_option("--mechanism", fit.mechanism, "Rows to keep");
  fit_cmd->add_option("--epsilon", fit.epsilon, "Rows to keep");

  ServeOptions srv;
  CLI::App* serve = app.add_subcommand("serve", "Run the aggregator");
  serve->add_option("--bind", srv.bind, "host:port (port 0 = any)");
  serve->add_option("--clients", srv.clients, "Users to wait for")
      ->required()
      ->check(CLI::PositiveNumber);
  serve->add_option("--epsilon", srv.epsilon, "Privacy budget or 'inf'");
  serve->add_option("--depth", srv.depth, "Number of rounds")->required();
  serve->add_option("--gamma", srv.gamma, "Branching threshold")->required();
  serve->add_option("--timeout-ms", srv.timeout_ms, "Per-round timeout")
      ->check(CLI::PositiveNumber);
  serve->add_option("--transcript", srv.transcript_out, "Transcript file");
  serve->add_option("--port-file", srv.port_file,
                    "Write the bound port here");

  ClientCommandOptions cli;
  CLI::App* client = app.add_subcommand("client", "Run one user");
  client->add_option("--connect", cli.connect, "host:port");
  client->add_option("--value", cli.value, "Private value in [-1, 1]")
      ->required();
  client->add_option("--seed", cli.seed, "Random seed");
  client->add_option("--id", cli.id, "Client identifier");
  client->add_option("--timeout-ms", cli.timeout_ms, "Read timeout")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ldpmin::cli::kExitOk : ldpmin::cli::kExitUsage;
  }

  if (*simulate) return ldpmin::cli::RunSimulate(sim, std::cout, std::cerr);
  if (*experiment) {
    return ldpmin::cli::RunExperimentCommand(exp, std::cout, std::cerr);
  }
  if (*compare) {
    return ldpmin::cli::RunCompareCommand(cmp, std::cout, std::cerr);
  }
  if (*fit_cmd) return ldpmin::cli::RunFit(fit, std::cout, std::cerr);
  if (*serve) return ldpmin::cli::RunServe(srv, std::cout, std::cerr);
  return ldpmin::cli::RunClientCommand(cli, std::cout, std::cerr);
}
