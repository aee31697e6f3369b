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
#include <functional>
#include <optional>
#include <vector>

#include "sdspred/common.hpp"
#include "sdspred/noise_model.hpp"
#include "sdspred/rng.hpp"

namespace sdspred {

/// State stays representable as long as ||x||_inf stays below this; beyond
/// it the trajectory is treated as diverged.
inline constexpr double kDivergenceGuard = 1e12;

/// Discrete-time system x_{k+1} = f(x_k, u_k) + w_k with i.i.d. process
/// noise. Immutable and shareable across workers.
struct SystemModel {
  int dim = 0;
  std::function<Vec(const Vec&, const Vec&)> dynamics;
  std::optional<Mat> linear_F;  // set when dynamics is x -> F x (+ B u)
  NoiseModel noise;
  std::function<Vec(long)> input_policy;  // step -> input, defaults to zero

  /// Linear system F x + w; inputs default to zero.
  static SystemModel linear(Mat F, NoiseModel noise);
  /// General dynamics; inputs default to zero (dimension 0).
  static SystemModel nonlinear(int dim, std::function<Vec(const Vec&, const Vec&)> f,
                               NoiseModel noise);
};

/// y_k = g(x_k, u_k) + v_k. Identity reproduces the state exactly;
/// additive_gaussian adds a fresh draw from N(0, noise_cov).
struct ObservationModel {
  enum class Kind { kIdentity, kAdditiveGaussian };
  Kind kind = Kind::kIdentity;
  std::optional<NoiseModel> measurement_noise;

  static ObservationModel identity();
  static ObservationModel additive_gaussian(Mat noise_cov);
};

Vec observe(const ObservationModel& model, const Vec& state, const Vec& input,
            Rng& stream);

/// Realized states x_{[1:K]} and noises w_{[0:K-1]} with the generating
/// seed. states[k] = dynamics(states[k-1], inputs[k-1]) + noises[k-1]
/// reconstructs bitwise when replayed with the same seed.
struct Trajectory {
  Vec initial_state;
  std::vector<Vec> states;  // x_1 .. x_K
  std::vector<Vec> noises;  // w_0 .. w_{K-1}
  std::vector<Vec> inputs;  // u_0 .. u_{K-1}
  std::uint64_t seed = 0;

  long horizon() const { return static_cast<long>(states.size()); }
  /// x_k for k in [0, K]; k = 0 is the initial state.
  const Vec& state(long k) const {
    return k == 0 ? initial_state : states[static_cast<std::size_t>(k - 1)];
  }
};

/// Runs the recursion for K steps, recording states and the realized noises.
/// Deterministic given the seed. Throws SimulationDiverged (naming the step)
/// when ||x_k||_inf exceeds the guard or goes non-finite.
Trajectory simulate(const SystemModel& system, const Vec& x0, long K,
                    std::uint64_t seed);

/// diam(supp(x_t)) > 2 eps, the small-tolerance condition under which the
/// epsilon-accurate probability decays. Unbounded noise always passes.
bool epsilon_condition_holds(const NoiseModel& noise, double eps);

/// d x d matrix with i.i.d. standard normal entries rescaled so its spectral
/// radius equals `spectral_radius`.
Mat random_matrix_with_radius(int dim, double spectral_radius, std::uint64_t seed);

/// SPD matrix A A^T from i.i.d. standard normal A, normalized to the given
/// spectral radius.
Mat random_spd_with_radius(int dim, double spectral_radius, std::uint64_t seed);

}  // namespace sdspred
