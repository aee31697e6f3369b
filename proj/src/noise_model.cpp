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

#include "sdspred/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdspred {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)
}  // namespace

double normal_interval_mass(double mu, double sigma, double a, double b) {
  if (b <= a) return 0.0;
  const double za = (a - mu) / (sigma * kSqrt2);
  const double zb = (b - mu) / (sigma * kSqrt2);
  return 0.5 * (std::erf(zb) - std::erf(za));
}

struct NoiseModel::GaussianData {
  Vec mean;
  Mat cov;
  Mat chol_lower;     // cov = L L^T
  double log_det = 0; // ln det(cov)
  bool diagonal = false;
};

struct NoiseModel::UniformBoxData {
  Vec center;
  Vec half_widths;
  double volume = 0;
};

struct NoiseModel::GridDensityData {
  GridPartition cells;
  std::vector<double> weights;  // bounded cells only
  std::vector<double> cdf;      // cumulative over bounded cells
  explicit GridDensityData(GridPartition c) : cells(std::move(c)) {}
};

NoiseModel NoiseModel::gaussian(Vec mean, Mat covariance) {
  const long d = mean.size();
  require(d >= 1, "gaussian: dimension must be >= 1");
  require(covariance.rows() == d && covariance.cols() == d,
          "gaussian: covariance shape does not match mean dimension");
  if (!covariance.isApprox(covariance.transpose(), 1e-10))
    throw std::domain_error("gaussian: covariance is not symmetric");
  Eigen::LLT<Mat> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("gaussian: covariance is not positive definite");
  auto data = std::make_shared<GaussianData>();
  data->mean = std::move(mean);
  data->cov = std::move(covariance);
  data->chol_lower = llt.matrixL();
  data->log_det = 0.0;
  for (long i = 0; i < d; ++i)
    data->log_det += 2.0 * std::log(data->chol_lower(i, i));
  data->diagonal = true;
  for (long i = 0; i < d && data->diagonal; ++i)
    for (long j = 0; j < d; ++j)
      if (i != j && data->cov(i, j) != 0.0) {
        data->diagonal = false;
        break;
      }
  NoiseModel m;
  m.kind_ = Kind::kGaussian;
  m.dim_ = static_cast<int>(d);
  m.gauss_ = std::move(data);
  return m;
}

NoiseModel NoiseModel::uniform_box(Vec center, Vec half_widths) {
  const long d = center.size();
  require(d >= 1, "uniform_box: dimension must be >= 1");
  require(half_widths.size() == d, "uniform_box: center/half_widths mismatch");
  require((half_widths.array() > 0.0).all(),
          "uniform_box: half widths must be strictly positive");
  auto data = std::make_shared<UniformBoxData>();
  data->center = std::move(center);
  data->half_widths = std::move(half_widths);
  data->volume = (2.0 * data->half_widths.array()).prod();
  NoiseModel m;
  m.kind_ = Kind::kUniformBox;
  m.dim_ = static_cast<int>(d);
  m.box_ = std::move(data);
  return m;
}

NoiseModel NoiseModel::grid_density(GridPartition cells,
                                    std::vector<double> weights) {
  const std::size_t bounded = cells.bounded_cell_count();
  if (weights.size() == cells.cell_count()) {
    require(weights.back() <= 1e-12,
            "grid_density: overflow cell must carry no mass");
    weights.pop_back();
  }
  require(weights.size() == bounded,
          "grid_density: weight count does not match cell count");
  double total = 0.0;
  for (double w : weights) {
    require(w >= 0.0, "grid_density: negative weight");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12,
          "grid_density: weights must sum to 1 within 1e-12");
  auto data = std::make_shared<GridDensityData>(std::move(cells));
  data->weights = std::move(weights);
  data->cdf.resize(bounded);
  double run = 0.0;
  for (std::size_t i = 0; i < bounded; ++i) {
    run += data->weights[i];
    data->cdf[i] = run;
  }
  NoiseModel m;
  m.kind_ = Kind::kGridDensity;
  m.dim_ = data->cells.dim();
  m.grid_ = std::move(data);
  return m;
}

double NoiseModel::density(const Vec& point) const {
  require(point.size() == dim_, "density: point dimension mismatch");
  switch (kind_) {
    case Kind::kGaussian: {
      Vec delta = point - gauss_->mean;
      gauss_->chol_lower.triangularView<Eigen::Lower>().solveInPlace(delta);
      const double quad = delta.squaredNorm();
      return std::exp(-0.5 * (quad + gauss_->log_det + dim_ * kLog2Pi));
    }
    case Kind::kUniformBox: {
      for (long a = 0; a < dim_; ++a)
        if (std::abs(point[a] - box_->center[a]) > box_->half_widths[a])
          return 0.0;
      return 1.0 / box_->volume;
    }
    case Kind::kGridDensity: {
      const std::size_t i = grid_->cells.label(point);
      if (grid_->cells.is_overflow(i)) return 0.0;
      return grid_->weights[i] / grid_->cells.cell_volume();
    }
  }
  return 0.0;
}

Vec NoiseModel::sample(Rng& stream) const {
  switch (kind_) {
    case Kind::kGaussian: {
      Vec z(dim_);
      for (long a = 0; a < dim_; ++a) z[a] = stream.normal();
      return gauss_->mean + gauss_->chol_lower * z;
    }
    case Kind::kUniformBox: {
      Vec x(dim_);
      for (long a = 0; a < dim_; ++a)
        x[a] = box_->center[a] + box_->half_widths[a] * (2.0 * stream.uniform() - 1.0);
      return x;
    }
    case Kind::kGridDensity: {
      const double u = stream.uniform() * grid_->cdf.back();
      const auto it = std::upper_bound(grid_->cdf.begin(), grid_->cdf.end(), u);
      std::size_t cell = static_cast<std::size_t>(it - grid_->cdf.begin());
      if (cell >= grid_->weights.size()) cell = grid_->weights.size() - 1;
      auto [lo, hi] = grid_->cells.cell_box(cell);
      Vec x(dim_);
      for (long a = 0; a < dim_; ++a)
        x[a] = lo[a] + (hi[a] - lo[a]) * stream.uniform();
      return x;
    }
  }
  return Vec();
}

std::optional<double> exact_box_mass(const NoiseModel& model, const Vec& center,
                                     double eps) {
  const int d = model.dim();
  switch (model.kind()) {
    case NoiseModel::Kind::kGaussian: {
      const Mat& cov = model.gaussian_cov();
      for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j)
          if (i != j && cov(i, j) != 0.0) return std::nullopt;
      double p = 1.0;
      for (long a = 0; a < d; ++a)
        p *= normal_interval_mass(model.gaussian_mean()[a], std::sqrt(cov(a, a)),
                                  center[a] - eps, center[a] + eps);
      return p;
    }
    case NoiseModel::Kind::kUniformBox: {
      double p = 1.0;
      for (long a = 0; a < d; ++a) {
        const double c = model.box_center()[a];
        const double h = model.box_half_widths()[a];
        const double lo = std::max(center[a] - eps, c - h);
        const double hi = std::min(center[a] + eps, c + h);
        p *= hi > lo ? (hi - lo) / (2.0 * h) : 0.0;
      }
      return p;
    }
    case NoiseModel::Kind::kGridDensity: {
      const GridPartition& cells = model.grid_cells();
      const auto& weights = model.grid_weights();
      // Enumerate the cell ranges that overlap the query box per axis and
      // accumulate weight * overlap fraction.
      std::vector<long> first(static_cast<std::size_t>(d)), last(static_cast<std::size_t>(d));
      for (int a = 0; a < d; ++a) {
        const double o = cells.origin()[a];
        const double w = cells.cell_width()[a];
        const long n = cells.cells_per_axis()[static_cast<std::size_t>(a)];
        long f = static_cast<long>(std::floor((center[a] - eps - o) / w));
        long l = static_cast<long>(std::floor((center[a] + eps - o) / w));
        f = std::max<long>(f, 0);
        l = std::min<long>(l, n - 1);
        if (f > l) return 0.0;
        first[static_cast<std::size_t>(a)] = f;
        last[static_cast<std::size_t>(a)] = l;
      }
      double mass = 0.0;
      std::vector<long> coords(first);
      for (;;) {
        const std::size_t idx = cells.flatten(coords);
        if (weights[idx] > 0.0) {
          double frac = 1.0;
          for (int a = 0; a < d; ++a) {
            const double w = cells.cell_width()[a];
            const double lo = cells.origin()[a] + static_cast<double>(coords[static_cast<std::size_t>(a)]) * w;
            const double hi = lo + w;
            const double ov = std::min(hi, center[a] + eps) - std::max(lo, center[a] - eps);
            frac *= std::max(0.0, ov) / w;
          }
          mass += weights[idx] * frac;
        }
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++coords[static_cast<std::size_t>(a)] <= last[static_cast<std::size_t>(a)]) break;
          coords[static_cast<std::size_t>(a)] = first[static_cast<std::size_t>(a)];
        }
        if (a < 0) break;
      }
      return std::min(mass, 1.0);
    }
  }
  return std::nullopt;
}

BoxProbability NoiseModel::box_probability(const Vec& center, double eps,
                                           long budget, std::uint64_t seed) const {
  require(center.size() == dim_, "box_probability: center dimension mismatch");
  require(eps > 0.0, "box_probability: eps must be > 0");
  switch (kind_) {
    case Kind::kUniformBox:
      return {*exact_box_mass(*this, center, eps), 0.0};
    case Kind::kGaussian:
      if (gauss_->diagonal) return {*exact_box_mass(*this, center, eps), 0.0};
      break;
    case Kind::kGridDensity:
      break;
  }
  if (budget <= 0)
    throw ConfigError(
        "box_probability: this model kind needs a positive Monte-Carlo budget");
  Rng rng(seed);
  long hits = 0;
  if (kind_ == Kind::kGaussian) {
    Vec z(dim_), w(dim_);
    for (long i = 0; i < budget; ++i) {
      for (long a = 0; a < dim_; ++a) z[a] = rng.normal();
      w.noalias() = gauss_->chol_lower * z;
      w += gauss_->mean;
      bool in = true;
      for (long a = 0; a < dim_; ++a)
        if (std::abs(w[a] - center[a]) > eps) {
          in = false;
          break;
        }
      hits += in;
    }
  } else {
    for (long i = 0; i < budget; ++i) {
      Vec w = sample(rng);
      bool in = true;
      for (long a = 0; a < dim_; ++a)
        if (std::abs(w[a] - center[a]) > eps) {
          in = false;
          break;
        }
      hits += in;
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(budget);
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(budget));
  return {p, se};
}

double NoiseModel::differential_entropy() const {
  switch (kind_) {
    case Kind::kGaussian:
      return 0.5 * (dim_ * (kLog2Pi + 1.0) + gauss_->log_det);
    case Kind::kUniformBox:
      return (2.0 * box_->half_widths.array()).log().sum();
    case Kind::kGridDensity: {
      const double vol = grid_->cells.cell_volume();
      double h = 0.0;
      for (double w : grid_->weights)
        if (w > 0.0) h += w * std::log(vol / w);
      return h;
    }
  }
  return 0.0;
}

McEstimate NoiseModel::mc_differential_entropy(long n, std::uint64_t seed) const {
  require(n >= 100, "mc_differential_entropy: need n >= 100");
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    const Vec x = sample(rng);
    const double q = density(x);
    if (!(q > 0.0))
      throw std::logic_error(
          "mc_differential_entropy: drew a sample with zero density "
          "(support mismatch between sampler and density)");
    const double v = -std::log(q);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

Vec NoiseModel::mean() const {
  switch (kind_) {
    case Kind::kGaussian:
      return gauss_->mean;
    case Kind::kUniformBox:
      return box_->center;
    case Kind::kGridDensity: {
      Vec m = Vec::Zero(dim_);
      for (std::size_t i = 0; i < grid_->weights.size(); ++i)
        if (grid_->weights[i] > 0.0)
          m += grid_->weights[i] * grid_->cells.cell_center(i);
      return m;
    }
  }
  return Vec();
}

Mat NoiseModel::covariance() const {
  switch (kind_) {
    case Kind::kGaussian:
      return gauss_->cov;
    case Kind::kUniformBox: {
      Mat c = Mat::Zero(dim_, dim_);
      for (long a = 0; a < dim_; ++a)
        c(a, a) = box_->half_widths[a] * box_->half_widths[a] / 3.0;
      return c;
    }
    case Kind::kGridDensity: {
      // Exact moments of the piecewise-constant density: per-cell mean is the
      // center, per-cell covariance is diag(width^2/12).
      const Vec m = mean();
      Mat c = Mat::Zero(dim_, dim_);
      Mat within = Mat::Zero(dim_, dim_);
      for (long a = 0; a < dim_; ++a) {
        const double w = grid_->cells.cell_width()[a];
        within(a, a) = w * w / 12.0;
      }
      for (std::size_t i = 0; i < grid_->weights.size(); ++i) {
        if (grid_->weights[i] <= 0.0) continue;
        const Vec delta = grid_->cells.cell_center(i) - m;
        c += grid_->weights[i] * (delta * delta.transpose() + within);
      }
      return c;
    }
  }
  return Mat();
}

double NoiseModel::support_diameter() const {
  switch (kind_) {
    case Kind::kGaussian:
      return kPosInf;
    case Kind::kUniformBox:
      return (2.0 * box_->half_widths.array()).maxCoeff();
    case Kind::kGridDensity: {
      auto [lo, hi] = support_box();
      return (hi - lo).maxCoeff();
    }
  }
  return 0.0;
}

std::pair<Vec, Vec> NoiseModel::support_box() const {
  switch (kind_) {
    case Kind::kGaussian: {
      Vec sd(dim_);
      for (long a = 0; a < dim_; ++a) sd[a] = std::sqrt(gauss_->cov(a, a));
      return {gauss_->mean - 8.5 * sd, gauss_->mean + 8.5 * sd};
    }
    case Kind::kUniformBox:
      return {box_->center - box_->half_widths, box_->center + box_->half_widths};
    case Kind::kGridDensity: {
      Vec lo = Vec::Constant(dim_, kPosInf);
      Vec hi = Vec::Constant(dim_, kNegInf);
      for (std::size_t i = 0; i < grid_->weights.size(); ++i) {
        if (grid_->weights[i] <= 0.0) continue;
        auto [clo, chi] = grid_->cells.cell_box(i);
        lo = lo.cwiseMin(clo);
        hi = hi.cwiseMax(chi);
      }
      return {lo, hi};
    }
  }
  return {Vec(), Vec()};
}

double NoiseModel::cdf1(double x) const {
  require(dim_ == 1, "cdf1: model must be one-dimensional");
  switch (kind_) {
    case Kind::kGaussian:
      return 0.5 * (1.0 + std::erf((x - gauss_->mean[0]) /
                                   (std::sqrt(gauss_->cov(0, 0)) * kSqrt2)));
    case Kind::kUniformBox: {
      const double lo = box_->center[0] - box_->half_widths[0];
      const double hi = box_->center[0] + box_->half_widths[0];
      if (x <= lo) return 0.0;
      if (x >= hi) return 1.0;
      return (x - lo) / (hi - lo);
    }
    case Kind::kGridDensity: {
      const GridPartition& cells = grid_->cells;
      const double o = cells.origin()[0];
      const double w = cells.cell_width()[0];
      const long n = cells.cells_per_axis()[0];
      if (x <= o) return 0.0;
      if (x >= cells.covered_upper()[0]) return 1.0;
      const long j = std::min<long>(static_cast<long>(std::floor((x - o) / w)), n - 1);
      const double before = j > 0 ? grid_->cdf[static_cast<std::size_t>(j - 1)] : 0.0;
      const double frac = (x - (o + static_cast<double>(j) * w)) / w;
      return before + grid_->weights[static_cast<std::size_t>(j)] * frac;
    }
  }
  return 0.0;
}

const Vec& NoiseModel::gaussian_mean() const {
  require(kind_ == Kind::kGaussian, "gaussian_mean: wrong kind");
  return gauss_->mean;
}
const Mat& NoiseModel::gaussian_cov() const {
  require(kind_ == Kind::kGaussian, "gaussian_cov: wrong kind");
  return gauss_->cov;
}
const Vec& NoiseModel::box_center() const {
  require(kind_ == Kind::kUniformBox, "box_center: wrong kind");
  return box_->center;
}
const Vec& NoiseModel::box_half_widths() const {
  require(kind_ == Kind::kUniformBox, "box_half_widths: wrong kind");
  return box_->half_widths;
}
const GridPartition& NoiseModel::grid_cells() const {
  require(kind_ == Kind::kGridDensity, "grid_cells: wrong kind");
  return grid_->cells;
}
const std::vector<double>& NoiseModel::grid_weights() const {
  require(kind_ == Kind::kGridDensity, "grid_weights: wrong kind");
  return grid_->weights;
}

namespace {

// Box mass of a grid density is piecewise linear in each coordinate of the
// center, with knots where a box face crosses a cell face. Sweeping the knot
// set per axis from the best cell center is exact in 1-D and a good local
// refinement in higher dimensions.
double grid_density_max_box(const NoiseModel& model, double eps) {
  const GridPartition& cells = model.grid_cells();
  const int d = model.dim();
  std::vector<std::vector<double>> knots(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const double o = cells.origin()[a];
    const double w = cells.cell_width()[a];
    const long n = cells.cells_per_axis()[static_cast<std::size_t>(a)];
    auto& k = knots[static_cast<std::size_t>(a)];
    for (long j = 0; j <= n; ++j) {
      const double edge = o + static_cast<double>(j) * w;
      k.push_back(edge - eps);
      k.push_back(edge + eps);
      k.push_back(edge + 0.5 * w);
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
  }
  // Multistart: best positive-mass cell centers.
  const auto& weights = model.grid_weights();
  std::size_t best_cell = 0;
  double best_w = -1.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > best_w) {
      best_w = weights[i];
      best_cell = i;
    }
  Vec center = cells.cell_center(best_cell);
  double best = *exact_box_mass(model, center, eps);
  if (d == 1) {
    for (double u : knots[0]) {
      Vec c(1);
      c[0] = u;
      best = std::max(best, *exact_box_mass(model, c, eps));
    }
    return best;
  }
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int a = 0; a < d; ++a) {
      double best_u = center[a];
      for (double u : knots[static_cast<std::size_t>(a)]) {
        Vec c = center;
        c[a] = u;
        const double m = *exact_box_mass(model, c, eps);
        if (m > best) {
          best = m;
          best_u = u;
        }
      }
      center[a] = best_u;
    }
  }
  return best;
}

}  // namespace

double max_box_probability(const NoiseModel& model, double eps, long budget,
                           std::uint64_t seed) {
  require(eps > 0.0, "max_box_probability: eps must be > 0");
  switch (model.kind()) {
    case NoiseModel::Kind::kGaussian:
      // Symmetric and unimodal: the box mass peaks at the mean.
      return model.box_probability(model.gaussian_mean(), eps, budget, seed).value;
    case NoiseModel::Kind::kUniformBox: {
      double p = 1.0;
      for (long a = 0; a < model.dim(); ++a)
        p *= std::min(1.0, eps / model.box_half_widths()[a]);
      return p;
    }
    case NoiseModel::Kind::kGridDensity:
      return grid_density_max_box(model, eps);
  }
  return 0.0;
}

}  // namespace sdspred
