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

#include "sdspred/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "sdspred/csv.hpp"
#include "sdspred/svg_plot.hpp"

namespace sdspred {

namespace {

constexpr std::uint64_t kFigInitialStateTag = 0xf161ULL;
constexpr std::uint64_t kFigSeedTag = 0x714aULL;
constexpr std::uint64_t kDiscretizeTag = 0xd15cULL;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<std::string> csv_header(const std::string& first, int d,
                                    const std::string& x_prefix,
                                    const std::string& w_prefix) {
  std::vector<std::string> names{first};
  for (int a = 1; a <= d; ++a) names.push_back(x_prefix + std::to_string(a));
  for (int a = 1; a <= d; ++a) names.push_back(w_prefix + std::to_string(a));
  return names;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  const int d = static_cast<int>(traj.initial_state.size());
  CsvWriter csv(path);
  csv.header(csv_header("k", d, "x_", "w_"));
  std::vector<double> row(static_cast<std::size_t>(1 + 2 * d));
  // Row 0 carries the initial state; its noise columns are zero by
  // convention. Row k >= 1 pairs x_k with the noise w_{k-1} that produced it.
  row[0] = 0.0;
  for (int a = 0; a < d; ++a) {
    row[static_cast<std::size_t>(1 + a)] = traj.initial_state[a];
    row[static_cast<std::size_t>(1 + d + a)] = 0.0;
  }
  csv.row(row);
  for (long k = 1; k <= traj.horizon(); ++k) {
    row[0] = static_cast<double>(k);
    for (int a = 0; a < d; ++a) {
      row[static_cast<std::size_t>(1 + a)] = traj.states[static_cast<std::size_t>(k - 1)][a];
      row[static_cast<std::size_t>(1 + d + a)] = traj.noises[static_cast<std::size_t>(k - 1)][a];
    }
    csv.row(row);
  }
}

DiscreteDist discretize_best(const NoiseModel& model, const GridPartition& grid,
                             long budget, std::uint64_t seed) {
  try {
    return discretize(model, grid, DiscretizeMethod::kAnalytic);
  } catch (const UnsupportedMethod&) {
    return discretize(model, grid, DiscretizeMethod::kMonteCarlo, budget, seed);
  }
}

std::vector<double> average_running_rates(const ExperimentSetup& setup,
                                          const PredictorSpec& predictor,
                                          long n_traj, long budget,
                                          std::uint64_t seed) {
  std::vector<double> avg(static_cast<std::size_t>(setup.horizon), 0.0);
  for (long i = 0; i < n_traj; ++i) {
    const Trajectory traj =
        nth_trajectory(setup.system, setup.horizon, seed, static_cast<std::size_t>(i));
    const auto rates = running_rates(
        step_log_scores(predictor, traj, setup.eps, budget, setup.workers));
    for (std::size_t k = 0; k < rates.size(); ++k) avg[k] += rates[k];
  }
  for (double& v : avg) v /= static_cast<double>(n_traj);
  return avg;
}

}  // namespace

ExperimentSetup load_experiment(const RunOptions& options) {
  ExperimentSetup setup{Config::parse_file(options.config_path),
                        SystemModel{},
                        0.1,
                        400,
                        200,
                        0,
                        kDefaultMcBudget,
                        options.workers,
                        "out"};
  setup.system = system_from_config(setup.config);
  setup.eps = setup.config.get_double_or("experiment", "eps", 0.1);
  if (setup.eps <= 0.0) throw ConfigError("[experiment] eps must be > 0");
  setup.horizon = setup.config.get_long_or("experiment", "K", 400);
  if (setup.horizon < 1) throw ConfigError("[experiment] K must be >= 1");
  setup.n_traj = setup.config.get_long_or("experiment", "n_traj", 200);
  if (setup.n_traj < 1) throw ConfigError("[experiment] n_traj must be >= 1");
  setup.seed = setup.config.has("experiment", "seed")
                   ? setup.config.get_u64("experiment", "seed")
                   : 1;
  setup.budget = setup.config.get_long_or("experiment", "budget", kDefaultMcBudget);
  setup.out_dir = setup.config.get_or("output", "dir", "out");
  if (options.seed_override) setup.seed = *options.seed_override;
  if (options.budget_override) setup.budget = *options.budget_override;
  if (options.out_override) setup.out_dir = *options.out_override;
  std::filesystem::create_directories(setup.out_dir);
  return setup;
}

Artifacts run_simulate(const ExperimentSetup& setup) {
  Artifacts artifacts;
  for (long i = 0; i < setup.n_traj; ++i) {
    const Trajectory traj = nth_trajectory(setup.system, setup.horizon, setup.seed,
                                           static_cast<std::size_t>(i));
    const std::string path =
        join_path(setup.out_dir, "trajectory_" + std::to_string(i) + ".csv");
    write_trajectory_csv(path, traj);
    artifacts.files.push_back(path);
  }
  return artifacts;
}

EvaluateResult run_evaluate(const ExperimentSetup& setup) {
  const PredictorSpec predictor = predictor_from_config(setup.config, setup.system);
  EvaluateResult result{expected_rate(setup.system, predictor, setup.eps,
                                      setup.horizon, setup.n_traj, setup.seed,
                                      setup.budget, setup.workers),
                        {}};
  MetricsReport& report = result.report;

  if (setup.config.has_section("partition")) {
    double width = setup.eps;
    if (setup.config.has("partition", "cell_width")) {
      const std::string w = setup.config.get("partition", "cell_width");
      width = w == "eps" ? setup.eps : setup.config.get_double("partition", "cell_width");
    }
    const GridPartition grid = grid_covering(setup.system.noise, width);
    const DiscreteDist q = discretize_best(setup.system.noise, grid, setup.budget,
                                           derive_seed(setup.seed, kDiscretizeTag, 0));
    const DiscreteDist qhat =
        discretize_best(predictor.output_law(), grid, setup.budget,
                        derive_seed(setup.seed, kDiscretizeTag, 1));
    report.discrete_rate = discrete_rate(q, {qhat});
  }
  if (setup.config.get_or("experiment", "epsilon_accurate", "false") == "true") {
    report.epsilon_accurate = epsilon_accurate_probability(
        setup.system, predictor, setup.eps, setup.horizon, setup.n_traj, setup.seed,
        setup.budget, setup.workers);
  }

  const std::string rates_path = join_path(setup.out_dir, "rates.csv");
  {
    CsvWriter csv(rates_path);
    csv.header({"trajectory_id", "rate"});
    for (std::size_t i = 0; i < report.per_trajectory_rates.size(); ++i)
      csv.row({static_cast<double>(i), report.per_trajectory_rates[i]});
  }
  const std::string running_path = join_path(setup.out_dir, "running_rate.csv");
  {
    const Trajectory traj = nth_trajectory(setup.system, setup.horizon, setup.seed, 0);
    const auto rates = running_rates(
        step_log_scores(predictor, traj, setup.eps, setup.budget, setup.workers));
    CsvWriter csv(running_path);
    csv.header({"k", "running_rate"});
    for (std::size_t k = 0; k < rates.size(); ++k)
      csv.row({static_cast<double>(k + 1), rates[k]});
  }
  const std::string summary_path = join_path(setup.out_dir, "summary.txt");
  {
    Config summary;
    summary.set("summary", "eps", format_number(report.eps));
    summary.set("summary", "K", std::to_string(report.horizon));
    summary.set("summary", "n_traj", std::to_string(report.n_traj));
    summary.set("summary", "mean_rate", format_number(report.mean_rate));
    summary.set("summary", "ci_halfwidth", format_number(report.ci_halfwidth));
    summary.set("summary", "exponent_approx", format_number(report.exponent_approx));
    summary.set("summary", "degenerate_count",
                std::to_string(report.degenerate_count));
    if (report.discrete_rate)
      summary.set("summary", "discrete_rate", format_number(*report.discrete_rate));
    if (report.epsilon_accurate) {
      summary.set("summary", "epsilon_accurate_estimate",
                  format_number(report.epsilon_accurate->estimate));
      summary.set("summary", "epsilon_accurate_log_estimate",
                  format_number(report.epsilon_accurate->log_estimate));
      summary.set("summary", "gamma", format_number(report.epsilon_accurate->gamma));
      summary.set("summary", "gamma_bound",
                  format_number(report.epsilon_accurate->gamma_bound));
    }
    summary.write_file(summary_path);
  }
  result.artifacts.files = {rates_path, running_path, summary_path};
  return result;
}

double run_exponent(const ExperimentSetup& setup, std::ostream& out) {
  const double value = exponent_approx(setup.system, setup.eps);
  out << format_number(value) << '\n';
  return value;
}

DesignRunResult run_design(const ExperimentSetup& setup) {
  DesignProblem problem;
  problem.sigma = setup.config.get_double_or("design", "sigma", 1.0);
  problem.support_halfwidth_cap = setup.config.get_double_or(
      "design", "support_halfwidth_cap", 3.0 * problem.sigma);
  problem.grid_resolution = setup.config.get_long_or("design", "grid_resolution", 10000);
  problem.tolerance = setup.config.get_double_or("design", "tolerance", 1e-6);

  DesignRunResult result{numeric_design(problem),
                         analytic_design(problem.sigma).differential_entropy(),
                         {}};
  const DesignResult& design = result.design;

  const std::string weights_path = join_path(setup.out_dir, "design_weights.csv");
  {
    CsvWriter csv(weights_path);
    csv.header({"cell_index", "weight"});
    for (std::size_t i = 0; i < design.weights.size(); ++i)
      csv.row({static_cast<double>(i), design.weights[i]});
  }
  const std::string noise_path = join_path(setup.out_dir, "designed_noise.ini");
  {
    Config block;
    noise_to_config(design.noise, block, "noise");
    block.write_file(noise_path);
  }
  const std::string summary_path = join_path(setup.out_dir, "design_summary.txt");
  {
    Config summary;
    summary.set("design_summary", "sigma", format_number(problem.sigma));
    summary.set("design_summary", "achieved_entropy",
                format_number(design.achieved_entropy));
    summary.set("design_summary", "analytic_entropy",
                format_number(result.analytic_entropy));
    summary.set("design_summary", "residual_normalization",
                format_number(design.residual_normalization));
    summary.set("design_summary", "residual_mean",
                format_number(design.residual_mean));
    summary.set("design_summary", "residual_variance",
                format_number(design.residual_variance));
    summary.set("design_summary", "lambda1", format_number(design.lambda1));
    summary.set("design_summary", "lambda2", format_number(design.lambda2));
    summary.set("design_summary", "iterations", std::to_string(design.iterations));
    summary.write_file(summary_path);
  }
  const std::string svg_path = join_path(setup.out_dir, "design_density.svg");
  {
    LinePlot plot;
    plot.title = "Designed noise density";
    plot.x_label = "x";
    plot.y_label = "density";
    PlotSeries designed{"numeric design", {}, {}, false};
    const double cell_w = design.grid.cell_width()[0];
    for (std::size_t i = 0; i < design.grid.bounded_cell_count(); ++i) {
      designed.x.push_back(design.grid.cell_center(i)[0]);
      designed.y.push_back(design.weights[i] / cell_w);
    }
    const NoiseModel analytic = analytic_design(problem.sigma);
    const double hw = analytic.box_half_widths()[0];
    PlotSeries uniform{"analytic design", {-hw, hw}, {}, true};
    uniform.y = {1.0 / (2.0 * hw), 1.0 / (2.0 * hw)};
    plot.series = {designed, uniform};
    write_svg(plot, svg_path);
  }
  result.artifacts.files = {weights_path, noise_path, summary_path, svg_path};
  return result;
}

Fig1Result run_fig1(const ExperimentSetup& setup) {
  Fig1Result result;
  result.reference = exponent_approx(setup.system, setup.eps);
  if (setup.config.has("fig1", "trajectory_seeds")) {
    const Vec seeds = setup.config.get_vec("fig1", "trajectory_seeds");
    for (long i = 0; i < seeds.size(); ++i)
      result.seeds.push_back(static_cast<std::uint64_t>(seeds[i]));
  } else {
    for (std::uint64_t i = 0; i < 3; ++i)
      result.seeds.push_back(derive_seed(setup.seed, kFigSeedTag, i));
  }

  // Common random initial point for every curve.
  Rng x0_rng(derive_seed(setup.seed, kFigInitialStateTag, 0));
  Vec x0(setup.system.dim);
  for (int a = 0; a < setup.system.dim; ++a) x0[a] = x0_rng.normal();

  const PredictorSpec predictor = PredictorSpec::optimal(setup.system);
  std::vector<Trajectory> trajectories;
  for (std::uint64_t seed : result.seeds) {
    trajectories.push_back(simulate(setup.system, x0, setup.horizon, seed));
    result.running.push_back(running_rates(step_log_scores(
        predictor, trajectories.back(), setup.eps, setup.budget, setup.workers)));
  }

  const std::string rate_path = join_path(setup.out_dir, "fig1_running_rate.csv");
  {
    CsvWriter csv(rate_path);
    std::vector<std::string> header{"k"};
    for (std::uint64_t seed : result.seeds)
      header.push_back("rate_seed" + std::to_string(seed));
    header.push_back("reference");
    csv.header(header);
    for (long k = 0; k < setup.horizon; ++k) {
      std::vector<double> row{static_cast<double>(k + 1)};
      for (const auto& series : result.running)
        row.push_back(series[static_cast<std::size_t>(k)]);
      row.push_back(result.reference);
      csv.row(row);
    }
  }
  const std::string traj_path = join_path(setup.out_dir, "fig1_trajectories.csv");
  {
    CsvWriter csv(traj_path);
    std::vector<std::string> header{"k"};
    for (std::uint64_t seed : result.seeds)
      for (int a = 1; a <= setup.system.dim; ++a)
        header.push_back("x_" + std::to_string(a) + "_seed" + std::to_string(seed));
    csv.header(header);
    for (long k = 0; k <= setup.horizon; ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (const auto& traj : trajectories)
        for (int a = 0; a < setup.system.dim; ++a) row.push_back(traj.state(k)[a]);
      csv.row(row);
    }
  }
  const std::string rate_svg = join_path(setup.out_dir, "fig1_running_rate.svg");
  {
    LinePlot plot;
    plot.title = "Running prediction rate, optimal predictor";
    plot.x_label = "k";
    plot.y_label = "running rate";
    for (std::size_t i = 0; i < result.running.size(); ++i) {
      PlotSeries s{"seed " + std::to_string(result.seeds[i]), {}, {}, false};
      for (long k = 0; k < setup.horizon; ++k) {
        s.x.push_back(static_cast<double>(k + 1));
        s.y.push_back(result.running[i][static_cast<std::size_t>(k)]);
      }
      plot.series.push_back(std::move(s));
    }
    PlotSeries ref{"reference", {1.0, static_cast<double>(setup.horizon)},
                   {result.reference, result.reference}, true};
    plot.series.push_back(std::move(ref));
    write_svg(plot, rate_svg);
  }
  const std::string traj_svg = join_path(setup.out_dir, "fig1_trajectories.svg");
  {
    LinePlot plot;
    plot.title = "State trajectories from a common initial point";
    plot.x_label = setup.system.dim >= 2 ? "x_1" : "k";
    plot.y_label = setup.system.dim >= 2 ? "x_2" : "x_1";
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      PlotSeries s{"seed " + std::to_string(result.seeds[i]), {}, {}, false};
      for (long k = 0; k <= setup.horizon; ++k) {
        const Vec& x = trajectories[i].state(k);
        if (setup.system.dim >= 2) {
          s.x.push_back(x[0]);
          s.y.push_back(x[1]);
        } else {
          s.x.push_back(static_cast<double>(k));
          s.y.push_back(x[0]);
        }
      }
      plot.series.push_back(std::move(s));
    }
    write_svg(plot, traj_svg);
  }
  result.artifacts.files = {rate_path, traj_path, rate_svg, traj_svg};
  return result;
}

Fig2Result run_fig2(const ExperimentSetup& setup) {
  Fig2Result result;
  const auto grid_values = [&](const char* key) {
    std::vector<double> values{0.0, 0.5, 1.0, 1.5};
    if (setup.config.has("fig2", key)) {
      const Vec v = setup.config.get_vec("fig2", key);
      values.assign(v.data(), v.data() + v.size());
    }
    return values;
  };
  result.tau_values = grid_values("tau_grid");
  result.eta_values = grid_values("eta_grid");
  const long n_traj = setup.config.get_long_or("fig2", "n_traj", 3);
  const long budget = setup.config.get_long_or("fig2", "budget", setup.budget);

  for (std::size_t i = 0; i < result.tau_values.size(); ++i) {
    const PredictorSpec predictor = PredictorSpec::mismatched_gaussian(
        setup.system, result.tau_values[i], 0.0);
    result.tau_curves.push_back(average_running_rates(
        setup, predictor, n_traj, budget, derive_seed(setup.seed, 0x7a0ULL, i)));
    result.tau_finals.push_back(result.tau_curves.back().back());
  }
  for (std::size_t i = 0; i < result.eta_values.size(); ++i) {
    const PredictorSpec predictor = PredictorSpec::mismatched_gaussian(
        setup.system, 0.0, result.eta_values[i]);
    result.eta_curves.push_back(average_running_rates(
        setup, predictor, n_traj, budget, derive_seed(setup.seed, 0xe7aULL, i)));
    result.eta_finals.push_back(result.eta_curves.back().back());
  }

  const auto write_sweep = [&](const char* stem, const char* param,
                               const std::vector<double>& values,
                               const std::vector<std::vector<double>>& curves) {
    const std::string csv_path =
        join_path(setup.out_dir, std::string(stem) + ".csv");
    CsvWriter csv(csv_path);
    std::vector<std::string> header{"k"};
    for (double v : values) header.push_back(std::string(param) + "_" + format_number(v));
    csv.header(header);
    for (long k = 0; k < setup.horizon; ++k) {
      std::vector<double> row{static_cast<double>(k + 1)};
      for (const auto& curve : curves) row.push_back(curve[static_cast<std::size_t>(k)]);
      csv.row(row);
    }
    const std::string svg_path =
        join_path(setup.out_dir, std::string(stem) + ".svg");
    LinePlot plot;
    plot.title = std::string("Running rate under ") + param + " mismatch";
    plot.x_label = "k";
    plot.y_label = "running rate";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      PlotSeries s{std::string(param) + " = " + format_number(values[i]), {}, {}, false};
      for (long k = 0; k < setup.horizon; ++k) {
        s.x.push_back(static_cast<double>(k + 1));
        s.y.push_back(curves[i][static_cast<std::size_t>(k)]);
      }
      plot.series.push_back(std::move(s));
    }
    write_svg(plot, svg_path);
    result.artifacts.files.push_back(csv_path);
    result.artifacts.files.push_back(svg_path);
  };
  write_sweep("fig2_tau", "tau", result.tau_values, result.tau_curves);
  write_sweep("fig2_eta", "eta", result.eta_values, result.eta_curves);
  return result;
}

}  // namespace sdspred
