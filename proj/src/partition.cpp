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

#include "sdspred/partition.hpp"

#include <cmath>
#include <cstring>

#include "sdspred/noise_model.hpp"

namespace sdspred {

namespace {

std::uint64_t hash_doubles(std::uint64_t h, const double* data, long n) {
  for (long i = 0; i < n; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], sizeof bits);
    h = mix64(h ^ bits);
  }
  return h;
}

}  // namespace

GridPartition::GridPartition(Vec origin, Vec cell_width, Vec upper)
    : origin_(std::move(origin)), cell_width_(std::move(cell_width)) {
  const long d = origin_.size();
  require(d >= 1, "GridPartition: dimension must be >= 1");
  require(cell_width_.size() == d && upper.size() == d,
          "GridPartition: origin/cell_width/upper dimension mismatch");
  cells_per_axis_.resize(static_cast<std::size_t>(d));
  covered_upper_.resize(d);
  total_cells_ = 1;
  for (long a = 0; a < d; ++a) {
    require(cell_width_[a] > 0.0, "GridPartition: cell width must be > 0");
    require(upper[a] > origin_[a], "GridPartition: upper must exceed origin");
    long n = static_cast<long>(std::ceil((upper[a] - origin_[a]) / cell_width_[a]));
    if (n < 1) n = 1;
    cells_per_axis_[static_cast<std::size_t>(a)] = n;
    covered_upper_[a] = origin_[a] + static_cast<double>(n) * cell_width_[a];
    total_cells_ *= static_cast<std::size_t>(n);
  }
  strides_.resize(static_cast<std::size_t>(d));
  std::size_t stride = 1;
  for (long a = d - 1; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] = stride;
    stride *= static_cast<std::size_t>(cells_per_axis_[static_cast<std::size_t>(a)]);
  }
  std::uint64_t h = mix64(0xa11ce11ULL + static_cast<std::uint64_t>(d));
  h = hash_doubles(h, origin_.data(), d);
  h = hash_doubles(h, cell_width_.data(), d);
  h = hash_doubles(h, covered_upper_.data(), d);
  tag_ = h;
}

double GridPartition::cell_volume() const { return cell_width_.prod(); }

std::size_t GridPartition::label(const Vec& point) const {
  require(point.size() == origin_.size(),
          "label: point dimension does not match partition");
  std::size_t index = 0;
  for (long a = 0; a < origin_.size(); ++a) {
    const double rel = (point[a] - origin_[a]) / cell_width_[a];
    // Half-open cells [lo, hi): a point on a shared face belongs to the
    // upper cell.
    const double f = std::floor(rel);
    if (f < 0.0 || f >= static_cast<double>(cells_per_axis_[static_cast<std::size_t>(a)]))
      return overflow_index();
    index += static_cast<std::size_t>(f) * strides_[static_cast<std::size_t>(a)];
  }
  return index;
}

std::vector<long> GridPartition::cell_coords(std::size_t index) const {
  require(index < total_cells_, "cell_coords: not a bounded cell");
  std::vector<long> coords(static_cast<std::size_t>(dim()));
  for (std::size_t a = 0; a < coords.size(); ++a) {
    coords[a] = static_cast<long>(index / strides_[a]);
    index %= strides_[a];
  }
  return coords;
}

std::size_t GridPartition::flatten(const std::vector<long>& coords) const {
  require(coords.size() == static_cast<std::size_t>(dim()),
          "flatten: coordinate dimension mismatch");
  std::size_t index = 0;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    require(coords[a] >= 0 && coords[a] < cells_per_axis_[a],
            "flatten: coordinate out of range");
    index += static_cast<std::size_t>(coords[a]) * strides_[a];
  }
  return index;
}

Vec GridPartition::cell_center(std::size_t index) const {
  auto coords = cell_coords(index);
  Vec center(dim());
  for (long a = 0; a < dim(); ++a)
    center[a] = origin_[a] +
                (static_cast<double>(coords[static_cast<std::size_t>(a)]) + 0.5) *
                    cell_width_[a];
  return center;
}

std::pair<Vec, Vec> GridPartition::cell_box(std::size_t index) const {
  auto coords = cell_coords(index);
  Vec lo(dim()), hi(dim());
  for (long a = 0; a < dim(); ++a) {
    lo[a] = origin_[a] +
            static_cast<double>(coords[static_cast<std::size_t>(a)]) * cell_width_[a];
    hi[a] = lo[a] + cell_width_[a];
  }
  return {lo, hi};
}

DiscreteDist::DiscreteDist(std::vector<double> weights, std::uint64_t partition_tag)
    : weights_(std::move(weights)), partition_tag_(partition_tag) {
  require(!weights_.empty(), "DiscreteDist: empty weight vector");
  double total = 0.0;
  for (double w : weights_) {
    require(w >= 0.0, "DiscreteDist: negative weight");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-10,
          "DiscreteDist: weights must sum to 1 within 1e-10");
}

DiscreteDist::DiscreteDist(std::vector<double> weights, const GridPartition& partition)
    : DiscreteDist(std::move(weights), partition.tag()) {
  require(weights_.size() == partition.cell_count(),
          "DiscreteDist: weight count does not match partition cell count");
}

double shannon_entropy(const DiscreteDist& dist) {
  double h = 0.0;
  for (double w : dist.weights())
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

double kl_divergence(const DiscreteDist& p, const DiscreteDist& r) {
  require(p.size() == r.size(), "kl_divergence: size mismatch");
  if (p.partition_tag() != 0 && r.partition_tag() != 0)
    require(p.partition_tag() == r.partition_tag(),
            "kl_divergence: distributions come from different partitions");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (r[i] == 0.0) return kPosInf;
    kl += p[i] * std::log(p[i] / r[i]);
  }
  return kl < 0.0 ? 0.0 : kl;  // clamp tiny negative rounding
}

DiscreteDist empirical_type(const GridPartition& partition,
                            const std::vector<Vec>& samples) {
  require(!samples.empty(), "empirical_type: empty sample list");
  std::vector<double> counts(partition.cell_count(), 0.0);
  for (const Vec& s : samples) counts[partition.label(s)] += 1.0;
  const double n = static_cast<double>(samples.size());
  for (double& c : counts) c /= n;
  return DiscreteDist(std::move(counts), partition);
}

namespace {

// Per-axis interval masses of a product-form model over the grid columns,
// then a tensor product. Only the bounded box is enumerated; the overflow
// weight is the complement.
DiscreteDist discretize_product(const NoiseModel& model,
                                const GridPartition& partition) {
  const int d = partition.dim();
  std::vector<std::vector<double>> axis_mass(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const long n = partition.cells_per_axis()[static_cast<std::size_t>(a)];
    auto& masses = axis_mass[static_cast<std::size_t>(a)];
    masses.resize(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
      const double lo = partition.origin()[a] +
                        static_cast<double>(j) * partition.cell_width()[a];
      const double hi = lo + partition.cell_width()[a];
      double m = 0.0;
      if (model.kind() == NoiseModel::Kind::kGaussian) {
        const double mu = model.gaussian_mean()[a];
        const double sigma = std::sqrt(model.gaussian_cov()(a, a));
        m = normal_interval_mass(mu, sigma, lo, hi);
      } else {
        const double c = model.box_center()[a];
        const double h = model.box_half_widths()[a];
        const double ov_lo = std::max(lo, c - h);
        const double ov_hi = std::min(hi, c + h);
        m = ov_hi > ov_lo ? (ov_hi - ov_lo) / (2.0 * h) : 0.0;
      }
      masses[static_cast<std::size_t>(j)] = m;
    }
  }
  std::vector<double> weights(partition.cell_count(), 0.0);
  double bounded_total = 0.0;
  for (std::size_t i = 0; i < partition.bounded_cell_count(); ++i) {
    auto coords = partition.cell_coords(i);
    double w = 1.0;
    for (std::size_t a = 0; a < coords.size(); ++a)
      w *= axis_mass[a][static_cast<std::size_t>(coords[a])];
    weights[i] = w;
    bounded_total += w;
  }
  weights[partition.overflow_index()] = std::max(0.0, 1.0 - bounded_total);
  return DiscreteDist(std::move(weights), partition);
}

bool product_form(const NoiseModel& model) {
  switch (model.kind()) {
    case NoiseModel::Kind::kUniformBox:
      return true;
    case NoiseModel::Kind::kGaussian: {
      const Mat& cov = model.gaussian_cov();
      for (long i = 0; i < cov.rows(); ++i)
        for (long j = 0; j < cov.cols(); ++j)
          if (i != j && cov(i, j) != 0.0) return false;
      return true;
    }
    case NoiseModel::Kind::kGridDensity:
      return false;
  }
  return false;
}

}  // namespace

DiscreteDist discretize(const NoiseModel& model, const GridPartition& partition,
                        DiscretizeMethod method, long mc_samples,
                        std::uint64_t seed) {
  require(model.dim() == partition.dim(),
          "discretize: model and partition dimension mismatch");
  if (method == DiscretizeMethod::kAnalytic) {
    if (!product_form(model))
      throw UnsupportedMethod(
          "discretize: analytic integration needs a product-form model "
          "(diagonal-covariance gaussian or uniform box)");
    return discretize_product(model, partition);
  }
  if (mc_samples <= 0)
    throw ConfigError("discretize: Monte-Carlo method needs a positive sample count");
  Rng rng(seed);
  std::vector<double> counts(partition.cell_count(), 0.0);
  for (long i = 0; i < mc_samples; ++i) counts[partition.label(model.sample(rng))] += 1.0;
  for (double& c : counts) c /= static_cast<double>(mc_samples);
  return DiscreteDist(std::move(counts), partition);
}

GridPartition grid_covering(const NoiseModel& model, double cell_width) {
  require(cell_width > 0.0, "grid_covering: cell width must be > 0");
  Vec lo, hi;
  if (model.kind() == NoiseModel::Kind::kGaussian) {
    const int d = model.dim();
    lo.resize(d);
    hi.resize(d);
    for (int a = 0; a < d; ++a) {
      const double sd = std::sqrt(model.gaussian_cov()(a, a));
      lo[a] = model.gaussian_mean()[a] - 6.0 * sd;
      hi[a] = model.gaussian_mean()[a] + 6.0 * sd;
    }
  } else {
    std::tie(lo, hi) = model.support_box();
  }
  return GridPartition(lo, Vec::Constant(model.dim(), cell_width), hi);
}

}  // namespace sdspred
