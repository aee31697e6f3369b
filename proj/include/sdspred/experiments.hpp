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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdspred/config.hpp"
#include "sdspred/designer.hpp"
#include "sdspred/metrics.hpp"

namespace sdspred {

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  std::optional<long> budget_override;
  int workers = 0;  // 0 = hardware default
};

/// Parsed and validated experiment: system + knobs + output location.
struct ExperimentSetup {
  Config config;
  SystemModel system;
  double eps = 0.1;
  long horizon = 400;
  long n_traj = 200;
  std::uint64_t seed = 0;
  long budget = kDefaultMcBudget;
  int workers = 0;
  std::string out_dir;
};

ExperimentSetup load_experiment(const RunOptions& options);

struct Artifacts {
  std::vector<std::string> files;
};

/// Writes one CSV per trajectory (columns k, x_1..x_d, w_1..w_d; row 0
/// carries the initial state with zero noise columns).
Artifacts run_simulate(const ExperimentSetup& setup);

struct EvaluateResult {
  MetricsReport report;
  Artifacts artifacts;
};

/// expected_rate of the configured predictor, plus rates.csv, a running-rate
/// series for the first trajectory, and a key = value summary. A [partition]
/// block adds the discrete-approximation rate; `epsilon_accurate = true`
/// adds the decay estimate and its gamma^K bound.
EvaluateResult run_evaluate(const ExperimentSetup& setup);

/// Prints d ln(2 eps) - H_d(q) for the configured system and returns it.
double run_exponent(const ExperimentSetup& setup, std::ostream& out);

struct DesignRunResult {
  DesignResult design;
  double analytic_entropy = 0.0;
  Artifacts artifacts;
};

/// Max-entropy noise design from the [design] block; emits the designed law
/// as a reusable grid_density noise block plus CSV/SVG views.
DesignRunResult run_design(const ExperimentSetup& setup);

struct Fig1Result {
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> running;  // one series per seed
  double reference = 0.0;
  Artifacts artifacts;
};

/// Three seeded trajectories from a common random initial state, their
/// running prediction rates, and the asymptotic reference line.
Fig1Result run_fig1(const ExperimentSetup& setup);

struct Fig2Result {
  std::vector<double> tau_values;
  std::vector<double> eta_values;
  std::vector<std::vector<double>> tau_curves;  // averaged running rates
  std::vector<std::vector<double>> eta_curves;
  std::vector<double> tau_finals;
  std::vector<double> eta_finals;
  Artifacts artifacts;
};

/// Model-mismatch sweeps: tau over {0, 0.5, 1, 1.5} at eta = 0 and eta over
/// the same grid at tau = 0 (configurable via [fig2] tau_grid / eta_grid).
Fig2Result run_fig2(const ExperimentSetup& setup);

}  // namespace sdspred
