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

#include "sdspred/system_model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <utility>

namespace sdspred {

namespace {

std::function<Vec(long)> zero_inputs(int m) {
  return [m](long) { return Vec::Zero(m); };
}

}  // namespace

SystemModel SystemModel::linear(Mat F, NoiseModel noise) {
  const int d = noise.dim();
  require(F.rows() == d && F.cols() == d,
          "SystemModel::linear: F must be d x d with d = noise dimension");
  SystemModel s;
  s.dim = d;
  s.linear_F = F;
  s.dynamics = [F = std::move(F)](const Vec& x, const Vec&) -> Vec { return F * x; };
  s.noise = std::move(noise);
  s.input_policy = zero_inputs(0);
  return s;
}

SystemModel SystemModel::nonlinear(int dim,
                                   std::function<Vec(const Vec&, const Vec&)> f,
                                   NoiseModel noise) {
  require(noise.dim() == dim, "SystemModel: noise dimension mismatch");
  SystemModel s;
  s.dim = dim;
  s.dynamics = std::move(f);
  s.noise = std::move(noise);
  s.input_policy = zero_inputs(0);
  return s;
}

ObservationModel ObservationModel::identity() { return ObservationModel{}; }

ObservationModel ObservationModel::additive_gaussian(Mat noise_cov) {
  ObservationModel m;
  m.kind = Kind::kAdditiveGaussian;
  m.measurement_noise =
      NoiseModel::gaussian(Vec::Zero(noise_cov.rows()), std::move(noise_cov));
  return m;
}

Vec observe(const ObservationModel& model, const Vec& state, const Vec& input,
            Rng& stream) {
  (void)input;
  if (model.kind == ObservationModel::Kind::kIdentity) return state;
  require(model.measurement_noise->dim() == state.size(),
          "observe: measurement noise dimension mismatch");
  return state + model.measurement_noise->sample(stream);
}

Trajectory simulate(const SystemModel& system, const Vec& x0, long K,
                    std::uint64_t seed) {
  require(K >= 1, "simulate: horizon K must be >= 1");
  require(x0.size() == system.dim, "simulate: x0 dimension mismatch");
  Trajectory traj;
  traj.initial_state = x0;
  traj.seed = seed;
  traj.states.reserve(static_cast<std::size_t>(K));
  traj.noises.reserve(static_cast<std::size_t>(K));
  traj.inputs.reserve(static_cast<std::size_t>(K));
  Rng rng(seed);
  Vec x = x0;
  for (long k = 0; k < K; ++k) {
    Vec u = system.input_policy(k);
    Vec w = system.noise.sample(rng);
    Vec next = system.dynamics(x, u) + w;
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergenceGuard)
      throw SimulationDiverged(
          "simulate: state diverged at step " + std::to_string(k + 1) +
              " (||x||_inf exceeded " + std::to_string(kDivergenceGuard) + ")",
          k + 1);
    traj.inputs.push_back(std::move(u));
    traj.noises.push_back(std::move(w));
    traj.states.push_back(next);
    x = std::move(next);
  }
  return traj;
}

bool epsilon_condition_holds(const NoiseModel& noise, double eps) {
  require(eps > 0.0, "epsilon_condition_holds: eps must be > 0");
  return noise.support_diameter() > 2.0 * eps;
}

Mat random_matrix_with_radius(int dim, double spectral_radius, std::uint64_t seed) {
  require(dim >= 1, "random_matrix_with_radius: dim must be >= 1");
  require(spectral_radius > 0.0, "random_matrix_with_radius: radius must be > 0");
  Rng rng(seed);
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  require(rho > 0.0, "random_matrix_with_radius: degenerate draw");
  return A * (spectral_radius / rho);
}

Mat random_spd_with_radius(int dim, double spectral_radius, std::uint64_t seed) {
  require(dim >= 1, "random_spd_with_radius: dim must be >= 1");
  require(spectral_radius > 0.0, "random_spd_with_radius: radius must be > 0");
  Rng rng(seed);
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = rng.normal();
  Mat S = A * A.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  require(rho > 0.0, "random_spd_with_radius: degenerate draw");
  return S * (spectral_radius / rho);
}

}  // namespace sdspred
