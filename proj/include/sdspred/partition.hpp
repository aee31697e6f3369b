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
#include <vector>

#include "sdspred/common.hpp"

namespace sdspred {

class NoiseModel;

/// Axis-aligned grid over a finite box, plus a single overflow cell that
/// absorbs everything outside the box, so the cells cover all of R^d.
///
/// Bounded cells are half-open boxes: closed at the lower face, open at the
/// upper face. Along axis a the grid anchors at origin[a] and covers
/// ceil((upper[a]-origin[a])/width[a]) cells.
class GridPartition {
 public:
  GridPartition(Vec origin, Vec cell_width, Vec upper);

  int dim() const { return static_cast<int>(origin_.size()); }

  /// Bounded cells only. The overflow cell has index bounded_cell_count().
  std::size_t bounded_cell_count() const { return total_cells_; }
  /// Bounded cells plus the overflow cell.
  std::size_t cell_count() const { return total_cells_ + 1; }
  std::size_t overflow_index() const { return total_cells_; }

  const Vec& origin() const { return origin_; }
  const Vec& cell_width() const { return cell_width_; }
  /// Upper edge of the covered box (origin + cells_per_axis * width).
  const Vec& covered_upper() const { return covered_upper_; }
  const std::vector<long>& cells_per_axis() const { return cells_per_axis_; }

  /// max_{A in Sigma, A bounded} max_{x,y in A} ||x-y||_inf, i.e. the
  /// largest cell width over axes.
  double diameter() const { return cell_width_.maxCoeff(); }

  double cell_volume() const;

  /// Cell index for a point; the overflow cell catches points outside the
  /// covered box. Never fails.
  std::size_t label(const Vec& point) const;

  bool is_overflow(std::size_t index) const { return index == total_cells_; }

  /// Center of a bounded cell.
  Vec cell_center(std::size_t index) const;
  /// Lower/upper corner of a bounded cell (half-open box).
  std::pair<Vec, Vec> cell_box(std::size_t index) const;

  /// Per-axis cell coordinates of a bounded cell index (row-major layout).
  std::vector<long> cell_coords(std::size_t index) const;
  std::size_t flatten(const std::vector<long>& coords) const;

  /// Stable fingerprint of the grid geometry; used to reject mixing
  /// distributions from different partitions.
  std::uint64_t tag() const { return tag_; }

 private:
  Vec origin_;
  Vec cell_width_;
  Vec covered_upper_;
  std::vector<long> cells_per_axis_;
  std::vector<std::size_t> strides_;
  std::size_t total_cells_ = 0;
  std::uint64_t tag_ = 0;
};

/// Probability vector over the cells of a grid partition (overflow included,
/// as the last entry). A default tag of zero marks an ad-hoc distribution
/// that is only checked for size compatibility.
class DiscreteDist {
 public:
  explicit DiscreteDist(std::vector<double> weights,
                        std::uint64_t partition_tag = 0);
  DiscreteDist(std::vector<double> weights, const GridPartition& partition);

  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::uint64_t partition_tag() const { return partition_tag_; }

 private:
  std::vector<double> weights_;
  std::uint64_t partition_tag_;
};

/// -sum w_i ln w_i in nats, with 0 ln 0 := 0.
double shannon_entropy(const DiscreteDist& dist);

/// sum p_i ln(p_i / r_i); +inf when p puts mass where r has none.
/// Throws ContractViolation when the distributions live on different
/// partitions.
double kl_divergence(const DiscreteDist& p, const DiscreteDist& r);

/// Cell-frequency vector of a sample list (the type of the label sequence).
DiscreteDist empirical_type(const GridPartition& partition,
                            const std::vector<Vec>& samples);

enum class DiscretizeMethod { kAnalytic, kMonteCarlo };

/// Integrates the model density over every cell. Analytic integration is
/// available for product-form models (diagonal-covariance gaussian,
/// uniform box); everything else needs the Monte-Carlo method.
DiscreteDist discretize(const NoiseModel& model, const GridPartition& partition,
                        DiscretizeMethod method, long mc_samples = 0,
                        std::uint64_t seed = 0);

/// Grid with the given cell width per axis whose bounded box captures at
/// least 1 - 1e-6 of the model's mass (gaussians get mean +- 6 sd per axis;
/// bounded kinds get their exact support box). The overflow cell keeps the
/// discretization exact.
GridPartition grid_covering(const NoiseModel& model, double cell_width);

}  // namespace sdspred
