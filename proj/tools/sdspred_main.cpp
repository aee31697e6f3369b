/*
 * Copyright 2026 The sdspred Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "sdspred/csv.hpp"
#include "sdspred/experiments.hpp"

namespace {

struct CliArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  long budget = 0;
  int workers = 0;
};

void add_common(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config, "Experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Override the experiment seed");
  cmd->add_option("--out", args.out, "Override the output directory");
  cmd->add_option("--budget", args.budget,
                  "Override the Monte-Carlo sample budget");
  cmd->add_option("--workers", args.workers,
                  "Worker threads (0 = hardware default); never changes "
                  "numeric results");
}

sdspred::ExperimentSetup setup_from(const CLI::App* cmd, const CliArgs& args) {
  sdspred::RunOptions options;
  options.config_path = args.config;
  if (cmd->count("--seed") > 0) options.seed_override = args.seed;
  if (cmd->count("--out") > 0) options.out_override = args.out;
  if (cmd->count("--budget") > 0) options.budget_override = args.budget;
  options.workers = args.workers;
  return sdspred::load_experiment(options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic dynamical system predictability toolkit"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* simulate = app.add_subcommand("simulate", "Write seeded trajectories");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Prediction-rate metrics for a predictor");
  CLI::App* exponent =
      app.add_subcommand("exponent", "Print d ln(2 eps) - H_d(q)");
  CLI::App* design = app.add_subcommand("design", "Max-entropy noise design");
  CLI::App* fig1 = app.add_subcommand(
      "fig1", "Three-trajectory running-rate figure with reference line");
  CLI::App* fig2 = app.add_subcommand("fig2", "Mismatch sweep figures");
  for (CLI::App* cmd : {simulate, evaluate, exponent, design, fig1, fig2})
    add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const sdspred::ExperimentSetup setup = setup_from(cmd, args);
    if (cmd == simulate) {
      sdspred::run_simulate(setup);
    } else if (cmd == evaluate) {
      const auto result = sdspred::run_evaluate(setup);
      std::cout << "mean_rate = " << sdspred::format_number(result.report.mean_rate)
                << "\nci_halfwidth = "
                << sdspred::format_number(result.report.ci_halfwidth)
                << "\nexponent_approx = "
                << sdspred::format_number(result.report.exponent_approx) << '\n';
    } else if (cmd == exponent) {
      sdspred::run_exponent(setup, std::cout);
    } else if (cmd == design) {
      const auto result = sdspred::run_design(setup);
      std::cout << "achieved_entropy = "
                << sdspred::format_number(result.design.achieved_entropy)
                << "\nanalytic_entropy = "
                << sdspred::format_number(result.analytic_entropy) << '\n';
    } else if (cmd == fig1) {
      const auto result = sdspred::run_fig1(setup);
      std::cout << "reference = " << sdspred::format_number(result.reference) << '\n';
      for (std::size_t i = 0; i < result.running.size(); ++i)
        std::cout << "final_rate_seed" << result.seeds[i] << " = "
                  << sdspred::format_number(result.running[i].back()) << '\n';
    } else if (cmd == fig2) {
      const auto result = sdspred::run_fig2(setup);
      for (std::size_t i = 0; i < result.tau_values.size(); ++i)
        std::cout << "final_rate_tau_" << sdspred::format_number(result.tau_values[i])
                  << " = " << sdspred::format_number(result.tau_finals[i]) << '\n';
      for (std::size_t i = 0; i < result.eta_values.size(); ++i)
        std::cout << "final_rate_eta_" << sdspred::format_number(result.eta_values[i])
                  << " = " << sdspred::format_number(result.eta_finals[i]) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
