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
#include <memory>
#include <optional>
#include <vector>

#include "sdspred/common.hpp"
#include "sdspred/partition.hpp"
#include "sdspred/rng.hpp"

namespace sdspred {

inline constexpr std::uint64_t kDefaultMcSeed = 0x5d5ea11edULL;
inline constexpr long kDefaultMcBudget = 100000;

struct BoxProbability {
  double value = 0.0;
  double standard_error = 0.0;  // zero on the analytic paths
};

struct McEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// A d-dimensional noise law W with density q. Immutable after construction
/// and safe to share across workers; random streams are always external.
class NoiseModel {
 public:
  enum class Kind { kGaussian, kUniformBox, kGridDensity };

  /// Empty placeholder (dim 0); assign a factory result before use.
  NoiseModel() = default;

  /// Gaussian with symmetric positive-definite covariance (checked by
  /// Cholesky factorization).
  static NoiseModel gaussian(Vec mean, Mat covariance);
  /// Uniform on the axis-aligned box center +- half_widths (all > 0).
  static NoiseModel uniform_box(Vec center, Vec half_widths);
  /// Piecewise-constant density on the bounded cells of a grid partition.
  /// Weights must be nonnegative, sum to 1 within 1e-12, and put no mass on
  /// the overflow cell.
  static NoiseModel grid_density(GridPartition cells,
                                 std::vector<double> weights);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  /// q(point); zero outside the support of bounded-support kinds.
  double density(const Vec& point) const;

  /// One i.i.d. draw from q. Advancing the stream is the only side effect.
  Vec sample(Rng& stream) const;

  /// P(||W - center||_inf <= eps). Exact (zero standard error) for
  /// diagonal-covariance gaussians and uniform boxes; Monte Carlo with
  /// `budget` samples otherwise. Throws ConfigError when a Monte-Carlo kind
  /// is given a zero budget.
  BoxProbability box_probability(const Vec& center, double eps,
                                 long budget = kDefaultMcBudget,
                                 std::uint64_t seed = kDefaultMcSeed) const;

  /// H_d(q) in nats. Closed-form for gaussian and uniform box; for a grid
  /// density, the entropy of the piecewise-constant density,
  /// sum_i w_i ln(cell_volume / w_i).
  double differential_entropy() const;

  /// Monte-Carlo estimator -(1/n) sum ln q(x_i), x_i ~ q, with its standard
  /// error. Unbiased for H_d(q).
  McEstimate mc_differential_entropy(long n, std::uint64_t seed) const;

  /// E(q), exact for every kind.
  Vec mean() const;
  /// Cov(q), exact for every kind.
  Mat covariance() const;

  bool bounded_support() const { return kind_ != Kind::kGaussian; }
  /// diam(supp(q)) in the infinity norm; +inf for gaussians.
  double support_diameter() const;
  /// [lo, hi] hull of the support per axis; gaussians get mean +- 8.5 sd
  /// (a numerical-support hull, mass outside < 1e-16).
  std::pair<Vec, Vec> support_box() const;

  /// One-dimensional CDF, exact for every kind; requires dim() == 1.
  double cdf1(double x) const;

  // Parameter accessors (valid for the matching kind only).
  const Vec& gaussian_mean() const;
  const Mat& gaussian_cov() const;
  const Vec& box_center() const;
  const Vec& box_half_widths() const;
  const GridPartition& grid_cells() const;
  const std::vector<double>& grid_weights() const;

 private:
  struct GaussianData;
  struct UniformBoxData;
  struct GridDensityData;

  Kind kind_ = Kind::kGaussian;
  int dim_ = 0;
  std::shared_ptr<const GaussianData> gauss_;
  std::shared_ptr<const UniformBoxData> box_;
  std::shared_ptr<const GridDensityData> grid_;
};

/// P(a <= N(mu, sigma^2) <= b).
double normal_interval_mass(double mu, double sigma, double a, double b);

/// Exact box mass for the kinds that admit one (diagonal gaussian, uniform
/// box, grid density); nullopt for non-diagonal gaussians.
std::optional<double> exact_box_mass(const NoiseModel& model, const Vec& center,
                                     double eps);

/// gamma = max_s P(||W - s||_inf <= eps). Gaussians and uniform boxes peak
/// at their center of symmetry; grid densities are maximized by a sweep over
/// the break points of the piecewise-linear box-mass map (multistart grid
/// plus local refinement in d > 1).
double max_box_probability(const NoiseModel& model, double eps,
                           long budget = kDefaultMcBudget,
                           std::uint64_t seed = kDefaultMcSeed);

}  // namespace sdspred
