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

#include "sdspred/designer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace sdspred {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

struct GridMoments {
  double mean = 0.0;
  double raw2 = 0.0;  // E x^2 of the piecewise-constant density
  double var_x = 0.0;      // Var of cell centers under w
  double cov_x_x2 = 0.0;   // Cov(x, x^2) of cell centers
  double var_x2 = 0.0;     // Var(x^2) of cell centers
};

GridMoments grid_moments(const std::vector<double>& w, const std::vector<double>& x,
                         double cell_width) {
  GridMoments m;
  double e_x = 0, e_x2 = 0, e_x3 = 0, e_x4 = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double xi = x[i];
    e_x += w[i] * xi;
    e_x2 += w[i] * xi * xi;
    e_x3 += w[i] * xi * xi * xi;
    e_x4 += w[i] * xi * xi * xi * xi;
  }
  m.mean = e_x;
  // Within-cell spread of the piecewise-constant density.
  m.raw2 = e_x2 + cell_width * cell_width / 12.0;
  m.var_x = e_x2 - e_x * e_x;
  m.cov_x_x2 = e_x3 - e_x * e_x2;
  m.var_x2 = e_x4 - e_x2 * e_x2;
  return m;
}

std::vector<double> exp_family_weights(const std::vector<double>& x, double l1,
                                       double l2) {
  std::vector<double> w(x.size());
  double max_e = kNegInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    w[i] = l1 * x[i] + l2 * x[i] * x[i];
    max_e = std::max(max_e, w[i]);
  }
  double total = 0.0;
  for (double& wi : w) {
    wi = std::exp(wi - max_e);
    total += wi;
  }
  for (double& wi : w) wi /= total;
  return w;
}

double grid_entropy(const std::vector<double>& w, double cell_width) {
  double h = 0.0;
  for (double wi : w)
    if (wi > 0.0) h += wi * std::log(cell_width / wi);
  return h;
}

/// Builds a grid density over [-halfwidth, halfwidth] from a shape function
/// evaluated at cell centers.
NoiseModel shaped_grid_density(double halfwidth, long resolution,
                               const std::function<double(double)>& shape) {
  Vec lo(1), width(1), hi(1);
  lo[0] = -halfwidth;
  hi[0] = halfwidth;
  width[0] = 2.0 * halfwidth / static_cast<double>(resolution);
  GridPartition grid(lo, width, hi);
  std::vector<double> w(grid.bounded_cell_count());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = shape(grid.cell_center(i)[0]);
    w[i] = v > 0.0 ? v : 0.0;
    total += w[i];
  }
  require(total > 0.0, "shaped_grid_density: shape vanished everywhere");
  for (double& wi : w) wi /= total;
  // Renormalize the residual rounding drift so the weights pass the strict
  // sum check.
  const double drift = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& wi : w) wi /= drift;
  return NoiseModel::grid_density(std::move(grid), std::move(w));
}

double density_variance(const NoiseModel& m) { return m.covariance()(0, 0); }

/// Root-finds a monotone shape parameter so the discretized density's
/// variance hits sigma^2.
NoiseModel calibrate_variance(
    double sigma, double param_lo, double param_hi,
    const std::function<NoiseModel(double)>& build) {
  const double target = sigma * sigma;
  double lo = param_lo, hi = param_hi;
  double f_lo = density_variance(build(lo)) - target;
  const double f_hi = density_variance(build(hi)) - target;
  require(f_lo * f_hi <= 0.0,
          "calibrate_variance: target variance not bracketed by parameter range");
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = density_variance(build(mid)) - target;
    if (std::abs(f) < 1e-13) break;
    if ((f_lo <= 0.0) == (f <= 0.0)) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
    }
  }
  return build(mid);
}

bool uniform_design_shape(const NoiseModel& m, double sigma) {
  const double hw = kSqrt3 * sigma;
  if (m.kind() == NoiseModel::Kind::kUniformBox) {
    return m.dim() == 1 && std::abs(m.box_center()[0]) <= 1e-9 &&
           std::abs(m.box_half_widths()[0] - hw) <= 1e-9;
  }
  if (m.kind() == NoiseModel::Kind::kGridDensity && m.dim() == 1) {
    const auto& w = m.grid_weights();
    const auto [mn, mx] = std::minmax_element(w.begin(), w.end());
    if (*mx - *mn > 1e-9) return false;
    auto [lo, hi] = m.support_box();
    return std::abs(lo[0] + hw) <= 1e-6 && std::abs(hi[0] - hw) <= 1e-6;
  }
  return false;
}

}  // namespace

NoiseModel analytic_design(double sigma) {
  require(sigma > 0.0, "analytic_design: sigma must be > 0");
  Vec center = Vec::Zero(1);
  Vec hw = Vec::Constant(1, kSqrt3 * sigma);
  return NoiseModel::uniform_box(center, hw);
}

DesignResult numeric_design(const DesignProblem& problem) {
  require(problem.sigma > 0.0, "numeric_design: sigma must be > 0");
  require(problem.grid_resolution >= 100,
          "numeric_design: grid resolution must be >= 100");
  require(problem.tolerance > 0.0, "numeric_design: tolerance must be > 0");
  const double a = kSqrt3 * problem.sigma;
  if (problem.support_halfwidth_cap < a)
    throw InfeasibleProblem(
        "numeric_design: support cap below sqrt(3)*sigma cannot satisfy the "
        "variance constraint on the design support");

  // The stationarity condition ln q = l0 + l1 x + l2 x^2 with a free support
  // edge pins the support at +-sqrt(3) sigma (the branch with l2 = 0); the
  // moment system is then solved on that support.
  Vec lo(1), width(1), hi(1);
  lo[0] = -a;
  hi[0] = a;
  width[0] = 2.0 * a / static_cast<double>(problem.grid_resolution);
  GridPartition grid(lo, width, hi);
  const std::size_t n = grid.bounded_cell_count();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = grid.cell_center(i)[0];

  const double target_var = problem.sigma * problem.sigma;
  double l1 = problem.initial_lambda1, l2 = problem.initial_lambda2;
  std::vector<double> w;
  GridMoments m;
  int it = 0;
  for (;; ++it) {
    w = exp_family_weights(x, l1, l2);
    m = grid_moments(w, x, width[0]);
    const double r_mean = m.mean;
    const double r_var = m.raw2 - m.mean * m.mean - target_var;
    if (std::abs(r_mean) <= problem.tolerance && std::abs(r_var) <= problem.tolerance)
      break;
    if (it >= 200) {
      std::ostringstream msg;
      msg << "numeric_design: moment matching did not converge in 200 "
             "iterations; last residuals mean="
          << r_mean << " variance=" << r_var;
      throw ConvergenceFailure(msg.str());
    }
    // Newton step: the Jacobian of (E x, E x^2) in (l1, l2) is the
    // covariance matrix of the features (x, x^2).
    Mat jac(2, 2);
    jac << m.var_x, m.cov_x_x2, m.cov_x_x2, m.var_x2;
    Vec resid(2);
    resid << r_mean, r_var;
    const Vec step = jac.fullPivLu().solve(resid);
    l1 -= step[0];
    l2 -= step[1];
  }

  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> normalized = w;
  for (double& wi : normalized) wi /= total;
  NoiseModel designed = NoiseModel::grid_density(grid, normalized);
  std::vector<double> with_overflow = std::move(normalized);
  with_overflow.push_back(0.0);
  return DesignResult{grid,
                      DiscreteDist(std::move(with_overflow), grid),
                      std::move(designed),
                      grid_entropy(w, width[0]),
                      std::abs(total - 1.0),
                      std::abs(m.mean),
                      std::abs(m.raw2 - m.mean * m.mean - target_var),
                      l1,
                      l2,
                      it};
}

OneStepValue one_step_value(const NoiseModel& q, double r) {
  require(q.dim() == 1, "one_step_value: model must be one-dimensional");
  require(r > 0.0, "one_step_value: r must be > 0");
  auto [lo_v, hi_v] = q.support_box();
  const double lo = lo_v[0], hi = hi_v[0];
  const auto mass = [&](double u) { return q.cdf1(u + r) - q.cdf1(u - r); };
  const double step = r / 50.0;
  std::vector<double> candidates;
  candidates.push_back(0.0);
  for (double u = lo; u <= hi + step * 0.5; u += step) candidates.push_back(u);
  double best_u = 0.0, best_v = -1.0;
  for (double u : candidates) {
    const double v = mass(u);
    if (v > best_v + 1e-12 ||
        (std::abs(v - best_v) <= 1e-12 && std::abs(u) < std::abs(best_u))) {
      best_v = v;
      best_u = u;
    }
  }
  // Local refinement by interval shrinking around the best grid point.
  double span = step;
  for (int iter = 0; iter < 40; ++iter) {
    const double left = best_u - span, right = best_u + span;
    for (double u : {left, 0.5 * (left + best_u), 0.5 * (best_u + right), right}) {
      const double v = mass(u);
      if (v > best_v + 1e-14) {
        best_v = v;
        best_u = u;
      }
    }
    span *= 0.5;
  }
  return {best_v, best_u};
}

EquivalenceReport equivalence_check(
    double sigma, double r,
    const std::vector<std::pair<std::string, NoiseModel>>& candidate_family) {
  require(sigma > 0.0 && r > 0.0, "equivalence_check: sigma and r must be > 0");
  require(!candidate_family.empty(), "equivalence_check: empty family");
  EquivalenceReport report;
  const double target_var = sigma * sigma;
  for (const auto& [label, model] : candidate_family) {
    CandidateResult c;
    c.label = label;
    if (model.dim() != 1) {
      c.diagnostic = "excluded: not one-dimensional";
    } else if (!model.bounded_support()) {
      c.diagnostic = "excluded: unbounded support";
    } else if (std::abs(model.mean()[0]) > 1e-9) {
      c.diagnostic = "excluded: mean differs from 0";
    } else if (std::abs(model.covariance()(0, 0) - target_var) > 1e-9) {
      c.diagnostic = "excluded: variance differs from sigma^2";
    } else {
      c.feasible = true;
      const OneStepValue osv = one_step_value(model, r);
      c.one_step = osv.value;
      c.one_step_argmax = osv.argmax;
      c.entropy = model.differential_entropy();
      c.is_uniform_design = uniform_design_shape(model, sigma);
    }
    report.candidates.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < report.candidates.size(); ++i)
    if (report.candidates[i].feasible) report.by_one_step.push_back(i);
  report.by_entropy = report.by_one_step;
  std::stable_sort(report.by_one_step.begin(), report.by_one_step.end(),
                   [&](std::size_t a, std::size_t b) {
                     return report.candidates[a].one_step <
                            report.candidates[b].one_step;
                   });
  std::stable_sort(report.by_entropy.begin(), report.by_entropy.end(),
                   [&](std::size_t a, std::size_t b) {
                     return report.candidates[a].entropy >
                            report.candidates[b].entropy;
                   });
  constexpr double kTie = 1e-12;
  if (!report.by_one_step.empty()) {
    const CandidateResult& top = report.candidates[report.by_one_step.front()];
    for (std::size_t idx : report.by_one_step) {
      const CandidateResult& c = report.candidates[idx];
      const bool at_top = std::abs(c.one_step - top.one_step) <= kTie;
      if (at_top && idx != report.by_one_step.front()) report.tie_at_top_one_step = true;
      if (at_top && c.is_uniform_design) report.uniform_first_by_one_step = true;
    }
    const CandidateResult& top_h = report.candidates[report.by_entropy.front()];
    for (std::size_t idx : report.by_entropy) {
      const CandidateResult& c = report.candidates[idx];
      const bool at_top = std::abs(c.entropy - top_h.entropy) <= kTie;
      if (at_top && idx != report.by_entropy.front()) report.tie_at_top_entropy = true;
      if (at_top && c.is_uniform_design) report.uniform_first_by_entropy = true;
    }
  }
  return report;
}

NoiseModel candidate_truncated_gaussian(double sigma, double support_halfwidth,
                                        long resolution) {
  require(support_halfwidth > sigma,
          "candidate_truncated_gaussian: support too small for the variance");
  auto build = [&](double s) {
    return shaped_grid_density(support_halfwidth, resolution, [s](double x) {
      return std::exp(-0.5 * x * x / (s * s));
    });
  };
  return calibrate_variance(sigma, 0.05 * sigma, 50.0 * sigma, build);
}

NoiseModel candidate_triangle(double sigma, long resolution) {
  // Variance of the triangle on [-a, a] is a^2/6; bracket around sqrt(6) sigma.
  auto build = [&](double a) {
    return shaped_grid_density(a, resolution,
                               [a](double x) { return a - std::abs(x); });
  };
  return calibrate_variance(sigma, 1.2 * sigma, 5.0 * sigma, build);
}

NoiseModel candidate_two_bump(double sigma, double bump_halfwidth, long resolution) {
  require(bump_halfwidth > 0.0, "candidate_two_bump: bump half-width must be > 0");
  const double d = bump_halfwidth;
  auto build = [&](double c) {
    return shaped_grid_density(c + d, resolution, [c, d](double x) {
      return std::abs(std::abs(x) - c) <= d ? 1.0 : 0.0;
    });
  };
  // Variance is about c^2 + d^2/3, increasing in the bump center c.
  return calibrate_variance(sigma, 0.2 * sigma, 2.0 * sigma, build);
}

NoiseModel candidate_spike_and_edges(double sigma, long resolution) {
  // Half the mass in a narrow spike at the origin, the rest in two edge
  // bumps whose center is calibrated to hit the variance.
  const double spike_hw = 0.1 * sigma;
  const double edge_hw = 0.2 * sigma;
  auto build = [&](double c) {
    return shaped_grid_density(c + edge_hw, resolution, [&, c](double x) {
      if (std::abs(x) <= spike_hw) return 0.5 / (2.0 * spike_hw);
      if (std::abs(std::abs(x) - c) <= edge_hw) return 0.25 / (2.0 * edge_hw);
      return 0.0;
    });
  };
  return calibrate_variance(sigma, 0.5 * sigma, 2.5 * sigma, build);
}

}  // namespace sdspred
