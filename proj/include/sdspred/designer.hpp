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

#include <string>
#include <vector>

#include "sdspred/common.hpp"
#include "sdspred/noise_model.hpp"

namespace sdspred {

/// One-dimensional unpredictable-noise design: zero mean, variance sigma^2,
/// bounded support. The support cap must admit the design support
/// [-sqrt(3) sigma, sqrt(3) sigma] fixed by the stationarity condition with
/// vanishing quadratic multiplier. Diagonal covariances are handled axiswise
/// by the caller.
struct DesignProblem {
  double sigma = 1.0;
  double support_halfwidth_cap = 3.0;  // default 3 sigma for sigma = 1
  long grid_resolution = 10000;
  double tolerance = 1e-6;
  /// Starting multipliers for the Newton root-find.
  double initial_lambda1 = 0.0;
  double initial_lambda2 = 0.0;
};

struct DesignResult {
  GridPartition grid;
  DiscreteDist weights;
  /// The designed law as a noise model, directly usable by a system.
  NoiseModel noise;
  double achieved_entropy = 0.0;
  /// |sum w - 1|, |E x|, |E x^2 - sigma^2| of the designed density.
  double residual_normalization = 0.0;
  double residual_mean = 0.0;
  double residual_variance = 0.0;
  /// Exponential-family multipliers at convergence.
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int iterations = 0;
};

/// Closed-form maximizer: uniform on [-sqrt(3) sigma, sqrt(3) sigma].
/// Its variance is sigma^2 and its entropy ln(2 sqrt(3) sigma).
NoiseModel analytic_design(double sigma);

/// Numeric counterpart on a grid over the design support, with weights
/// parameterized as w_i proportional to exp(lambda1 x_i + lambda2 x_i^2) and
/// a Newton root-find matching the mean and variance of the piecewise-
/// constant density to (0, sigma^2) within `tolerance`. Throws
/// InfeasibleProblem when the cap is below sqrt(3) sigma and
/// ConvergenceFailure (with last residuals) when Newton stalls.
DesignResult numeric_design(const DesignProblem& problem);

struct OneStepValue {
  double value = 0.0;
  double argmax = 0.0;
};

/// max_u P(|X - u| <= r) for a one-dimensional law: grid search at
/// resolution <= r/50 plus local refinement. Ties prefer the center closest
/// to zero.
OneStepValue one_step_value(const NoiseModel& q, double r);

struct CandidateResult {
  std::string label;
  bool feasible = false;
  std::string diagnostic;  // set when excluded
  double one_step = 0.0;
  double one_step_argmax = 0.0;
  double entropy = 0.0;
  bool is_uniform_design = false;
};

struct EquivalenceReport {
  std::vector<CandidateResult> candidates;   // input order
  std::vector<std::size_t> by_one_step;      // feasible, ascending value
  std::vector<std::size_t> by_entropy;       // feasible, descending entropy
  bool uniform_first_by_one_step = false;
  bool uniform_first_by_entropy = false;
  bool tie_at_top_one_step = false;
  bool tie_at_top_entropy = false;
};

/// Ranks a candidate family by one-step predictability (ascending) and by
/// differential entropy (descending). Candidates must have mean 0, variance
/// sigma^2 and bounded support; violators are excluded with a diagnostic,
/// and exact ties are reported rather than treated as errors.
EquivalenceReport equivalence_check(
    double sigma, double r,
    const std::vector<std::pair<std::string, NoiseModel>>& candidate_family);

/// Grid-density candidate builders for design comparisons. Each shape has
/// one free parameter root-found so the discretized density's variance is
/// exactly sigma^2.
NoiseModel candidate_truncated_gaussian(double sigma, double support_halfwidth,
                                        long resolution);
NoiseModel candidate_triangle(double sigma, long resolution);
/// Two uniform bumps of the given half-width centered at +-c.
NoiseModel candidate_two_bump(double sigma, double bump_halfwidth, long resolution);
/// Heavy center spike plus two edge bumps; low entropy at fixed variance.
NoiseModel candidate_spike_and_edges(double sigma, long resolution);

}  // namespace sdspred
