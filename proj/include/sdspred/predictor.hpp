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

#include "sdspred/common.hpp"
#include "sdspred/noise_model.hpp"
#include "sdspred/system_model.hpp"

namespace sdspred {

/// Predictor with an explicitly declared per-step output law over the
/// noise-space prediction w_hat_k. The law uses only information available
/// at step k; with identity observation that is the full past state
/// sequence, never the incoming noise.
///
/// Stochastic predictors draw w_hat_k from the output law; a deterministic
/// predictor always returns a fixed point (its output law is a point mass).
class PredictorSpec {
 public:
  enum class Mode { kStochastic, kDeterministic };

  /// Complete observation + sampling from the true noise law. Its
  /// discretized output law equals the discretized noise law on any grid,
  /// which zeroes every KL term of the discrete performance expression.
  static PredictorSpec optimal(const SystemModel& system);

  /// Believed noise law N(mu + tau * 1, Sigma + eta * I) for a gaussian
  /// system; tau = eta = 0 coincides with the optimal predictor. Throws
  /// std::domain_error when Sigma + eta I is not positive definite.
  static PredictorSpec mismatched_gaussian(const SystemModel& system, double tau,
                                           double eta);

  /// Always predicts f(x_k, u_k) + point.
  static PredictorSpec deterministic(Vec point);

  Mode mode() const { return mode_; }
  const ObservationModel& observation() const { return observation_; }

  /// Output law at step k. All built-in constructions are step-invariant.
  const NoiseModel& output_law(long k = 0) const;
  const Vec& deterministic_point() const;

  /// Probability (over predictor randomness) that w_hat lands within eps of
  /// the realized noise: the box mass of the output law around it.
  /// Deterministic mode scores 1 when the fixed point is eps-close, else 0.
  BoxProbability step_score(const Vec& realized_noise, double eps,
                            long budget = kDefaultMcBudget,
                            std::uint64_t seed = kDefaultMcSeed) const;

  /// Draw the noise-space prediction for one step.
  Vec predict_noise(Rng& stream) const;

 private:
  PredictorSpec(Mode mode, NoiseModel law)
      : mode_(mode), output_law_(std::move(law)) {}

  Mode mode_;
  ObservationModel observation_ = ObservationModel::identity();
  NoiseModel output_law_;
  Vec point_;
};

}  // namespace sdspred
