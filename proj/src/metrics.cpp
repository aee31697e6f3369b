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

#include "sdspred/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sdspred/parallel.hpp"
#include "sdspred/rng.hpp"

namespace sdspred {

namespace {

constexpr std::uint64_t kStepScoreTag = 0x57e95c03ULL;
constexpr std::uint64_t kInitialStateTag = 0x1417a15ULL;
constexpr std::uint64_t kNoiseStreamTag = 0x2017eULL;

Vec standard_gaussian_vector(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Vec x(dim);
  for (int a = 0; a < dim; ++a) x[a] = rng.normal();
  return x;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double ci95_halfwidth(const std::vector<double>& v, double mean) {
  if (v.size() < 2 || !std::isfinite(mean)) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return 1.959963985 * sd / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

std::vector<double> step_log_scores(const PredictorSpec& predictor,
                                    const Trajectory& trajectory, double eps,
                                    long budget, int workers) {
  const std::size_t K = trajectory.noises.size();
  std::vector<double> log_scores(K);
  parallel_for(
      K,
      [&](std::size_t k) {
        const std::uint64_t seed = derive_seed(trajectory.seed, kStepScoreTag, k);
        const double p =
            predictor.step_score(trajectory.noises[k], eps, budget, seed).value;
        log_scores[k] = p > 0.0 ? std::log(p) : kNegInf;
      },
      workers);
  return log_scores;
}

double trajectory_rate(const SystemModel& system, const PredictorSpec& predictor,
                       const Trajectory& trajectory, double eps, long budget) {
  require(eps > 0.0, "trajectory_rate: eps must be > 0");
  require(!trajectory.noises.empty(), "trajectory_rate: empty trajectory");
  require(trajectory.states.size() == trajectory.noises.size(),
          "trajectory_rate: state/noise length mismatch");
  require(trajectory.noises.front().size() == system.dim,
          "trajectory_rate: trajectory dimension does not match system");
  const auto log_scores = step_log_scores(predictor, trajectory, eps, budget, 1);
  double sum = 0.0;
  for (double ls : log_scores) {
    if (ls == kNegInf) return kNegInf;
    sum += ls;
  }
  return sum / static_cast<double>(log_scores.size());
}

std::vector<double> running_rates(const std::vector<double>& log_scores) {
  std::vector<double> rates(log_scores.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < log_scores.size(); ++k) {
    sum += log_scores[k];
    rates[k] = sum / static_cast<double>(k + 1);
  }
  return rates;
}

Trajectory nth_trajectory(const SystemModel& system, long K,
                          std::uint64_t master_seed, std::size_t index) {
  const Vec x0 = standard_gaussian_vector(
      system.dim, derive_seed(master_seed, index, kInitialStateTag));
  return simulate(system, x0, K, derive_seed(master_seed, index, kNoiseStreamTag));
}

MetricsReport expected_rate(const SystemModel& system, const PredictorSpec& predictor,
                            double eps, long K, long n_traj, std::uint64_t seed,
                            long budget, int workers) {
  require(K >= 1, "expected_rate: K must be >= 1");
  require(n_traj >= 1, "expected_rate: n_traj must be >= 1");
  MetricsReport report;
  report.eps = eps;
  report.horizon = K;
  report.n_traj = n_traj;
  report.exponent_approx = exponent_approx(system, eps);
  report.per_trajectory_rates.resize(static_cast<std::size_t>(n_traj));
  parallel_for(
      static_cast<std::size_t>(n_traj),
      [&](std::size_t i) {
        const Trajectory traj = nth_trajectory(system, K, seed, i);
        report.per_trajectory_rates[i] =
            trajectory_rate(system, predictor, traj, eps, budget);
      },
      workers);
  for (double r : report.per_trajectory_rates)
    if (r == kNegInf) ++report.degenerate_count;
  report.mean_rate = mean_of(report.per_trajectory_rates);
  report.ci_halfwidth = ci95_halfwidth(report.per_trajectory_rates, report.mean_rate);
  return report;
}

double discrete_rate(const DiscreteDist& q_disc,
                     const std::vector<DiscreteDist>& qhat_sequence) {
  require(!qhat_sequence.empty(), "discrete_rate: empty predictor sequence");
  double kl_sum = 0.0;
  for (const DiscreteDist& qhat : qhat_sequence) {
    const double kl = kl_divergence(q_disc, qhat);
    if (kl == kPosInf) return kNegInf;
    kl_sum += kl;
  }
  return -shannon_entropy(q_disc) -
         kl_sum / static_cast<double>(qhat_sequence.size());
}

double exponent_approx(const NoiseModel& noise, double eps) {
  require(eps > 0.0, "exponent_approx: eps must be > 0");
  return static_cast<double>(noise.dim()) * std::log(2.0 * eps) -
         noise.differential_entropy();
}

double exponent_approx(const SystemModel& system, double eps) {
  return exponent_approx(system.noise, eps);
}

double type_rate(const std::vector<Vec>& noises, const GridPartition& partition,
                 const DiscreteDist& q_disc) {
  require(q_disc.partition_tag() == 0 || q_disc.partition_tag() == partition.tag(),
          "type_rate: q_disc was built on a different partition");
  require(q_disc.size() == partition.cell_count(),
          "type_rate: q_disc size does not match partition");
  const DiscreteDist type = empirical_type(partition, noises);
  const double kl = kl_divergence(type, q_disc);
  if (kl == kPosInf) return kNegInf;
  return -shannon_entropy(type) - kl;
}

double hoeffding_bound(const DiscreteDist& q_disc, long K, double t) {
  require(K >= 1, "hoeffding_bound: K must be >= 1");
  require(t > 0.0, "hoeffding_bound: t must be > 0");
  double L = 0.0;
  for (double q : q_disc.weights())
    if (q > 0.0) L = std::max(L, -std::log(q) / q);
  if (L == 0.0) return 0.0;  // single-cell distribution: deviation is always 0
  const double expo = -2.0 * static_cast<double>(K) * t * t / (L * L);
  return std::min(1.0, 2.0 * std::exp(expo));
}

EpsilonAccurateEstimate epsilon_accurate_probability(
    const SystemModel& system, const PredictorSpec& predictor, double eps, long K,
    long n_traj, std::uint64_t seed, long budget, int workers) {
  require(K >= 1 && n_traj >= 1, "epsilon_accurate_probability: bad K or n_traj");
  std::vector<double> log_products(static_cast<std::size_t>(n_traj));
  parallel_for(
      static_cast<std::size_t>(n_traj),
      [&](std::size_t i) {
        const Trajectory traj = nth_trajectory(system, K, seed, i);
        const double rate = trajectory_rate(system, predictor, traj, eps, budget);
        log_products[i] = rate == kNegInf ? kNegInf : static_cast<double>(K) * rate;
      },
      workers);
  const double max_lp = *std::max_element(log_products.begin(), log_products.end());
  EpsilonAccurateEstimate out;
  if (max_lp == kNegInf) {
    out.log_estimate = kNegInf;
    out.estimate = 0.0;
  } else {
    double acc = 0.0;
    for (double lp : log_products)
      if (lp != kNegInf) acc += std::exp(lp - max_lp);
    out.log_estimate =
        max_lp + std::log(acc) - std::log(static_cast<double>(n_traj));
    out.estimate = std::exp(out.log_estimate);
  }
  out.gamma = max_box_probability(system.noise, eps, budget,
                                  derive_seed(seed, 0x6a33aULL, 0));
  out.log_gamma_bound = static_cast<double>(K) * std::log(out.gamma);
  out.gamma_bound = std::exp(out.log_gamma_bound);
  return out;
}

}  // namespace sdspred
