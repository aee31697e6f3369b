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
#include <optional>
#include <vector>

#include "sdspred/common.hpp"
#include "sdspred/partition.hpp"
#include "sdspred/predictor.hpp"
#include "sdspred/system_model.hpp"

namespace sdspred {

/// Decay-rate estimate of the probability that every prediction error along
/// a horizon stays within eps, with the gamma^K upper bound. Log-domain
/// values are carried alongside because the plain values underflow quickly.
struct EpsilonAccurateEstimate {
  double estimate = 0.0;
  double log_estimate = kNegInf;
  double gamma = 0.0;
  double gamma_bound = 0.0;
  double log_gamma_bound = kNegInf;
};

struct MetricsReport {
  double eps = 0.0;
  long horizon = 0;
  long n_traj = 0;
  std::vector<double> per_trajectory_rates;
  /// Average of the per-trajectory rates; -inf when any trajectory was
  /// poisoned by a zero step score (see degenerate_count).
  double mean_rate = 0.0;
  double ci_halfwidth = 0.0;  // 95% normal CI over trajectories
  double exponent_approx = 0.0;
  std::optional<double> discrete_rate;
  std::optional<EpsilonAccurateEstimate> epsilon_accurate;
  /// Trajectories whose rate is -inf. A positive count flags a degenerate
  /// predictor rather than silently dropping those trajectories.
  long degenerate_count = 0;
  bool degenerate() const { return degenerate_count > 0; }
};

/// ln of the per-step score for every step of a trajectory. Step k's
/// Monte-Carlo stream is derived from (trajectory seed, k), so the result
/// does not depend on the worker count.
std::vector<double> step_log_scores(const PredictorSpec& predictor,
                                    const Trajectory& trajectory, double eps,
                                    long budget = kDefaultMcBudget,
                                    int workers = 1);

/// (1/K) sum_k ln P(||w_k - w_hat_k||_inf <= eps); -inf when any step
/// scores zero.
double trajectory_rate(const SystemModel& system, const PredictorSpec& predictor,
                       const Trajectory& trajectory, double eps,
                       long budget = kDefaultMcBudget);

/// Prefix averages of the step log scores: element k is the running rate
/// over steps 0..k.
std::vector<double> running_rates(const std::vector<double>& log_scores);

/// i-th member of the seeded trajectory ensemble used by expected_rate:
/// x0 ~ N(0, I) and the noise stream are both derived from
/// (master_seed, index) by a counter scheme.
Trajectory nth_trajectory(const SystemModel& system, long K,
                          std::uint64_t master_seed, std::size_t index);

/// Monte-Carlo mean of trajectory_rate over n_traj seeded trajectories.
/// Initial states are drawn from a standard gaussian on a per-trajectory
/// sub-stream; sub-seeds are counter-derived so the result is independent
/// of the worker count.
MetricsReport expected_rate(const SystemModel& system, const PredictorSpec& predictor,
                            double eps, long K, long n_traj, std::uint64_t seed,
                            long budget = kDefaultMcBudget, int workers = 0);

/// -H_s(q) - (1/K) sum_k KL(q || qhat_k); -inf when any KL diverges.
double discrete_rate(const DiscreteDist& q_disc,
                     const std::vector<DiscreteDist>& qhat_sequence);

/// d ln(2 eps) - H_d(q), the asymptotic optimal-rate approximation.
double exponent_approx(const NoiseModel& noise, double eps);
double exponent_approx(const SystemModel& system, double eps);

/// -H_s(type) - KL(type || q) from the empirical type of the noise
/// sequence; equals the direct per-step log-mass average exactly.
double type_rate(const std::vector<Vec>& noises, const GridPartition& partition,
                 const DiscreteDist& q_disc);

/// min(1, 2 exp(-2 K t^2 / L^2)) with L = max_i -ln(q_i)/q_i over
/// positive-mass cells. A point-mass distribution gives L = 0 and the bound
/// collapses to 0 (the deviation is identically zero in that case).
double hoeffding_bound(const DiscreteDist& q_disc, long K, double t);

/// Mean over trajectories of exp(K * trajectory_rate), accumulated in log
/// space, plus the gamma^K bound with gamma the maximal eps-box mass of the
/// system noise.
EpsilonAccurateEstimate epsilon_accurate_probability(
    const SystemModel& system, const PredictorSpec& predictor, double eps, long K,
    long n_traj, std::uint64_t seed, long budget = kDefaultMcBudget,
    int workers = 0);

}  // namespace sdspred
