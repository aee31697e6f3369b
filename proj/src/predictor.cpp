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

#include "sdspred/predictor.hpp"

#include <cmath>

namespace sdspred {

PredictorSpec PredictorSpec::optimal(const SystemModel& system) {
  return PredictorSpec(Mode::kStochastic, system.noise);
}

PredictorSpec PredictorSpec::mismatched_gaussian(const SystemModel& system,
                                                 double tau, double eta) {
  require(system.noise.kind() == NoiseModel::Kind::kGaussian,
          "mismatched_gaussian: system noise must be gaussian");
  const Vec mean =
      system.noise.gaussian_mean() + tau * Vec::Ones(system.dim);
  const Mat cov =
      system.noise.gaussian_cov() + eta * Mat::Identity(system.dim, system.dim);
  // NoiseModel::gaussian rejects a non-positive-definite Sigma + eta I.
  return PredictorSpec(Mode::kStochastic, NoiseModel::gaussian(mean, cov));
}

PredictorSpec PredictorSpec::deterministic(Vec point) {
  const long d = point.size();
  require(d >= 1, "deterministic: point must be non-empty");
  // Point mass stand-in; the law is never sampled in deterministic mode.
  PredictorSpec p(Mode::kDeterministic,
                  NoiseModel::uniform_box(point, Vec::Constant(d, 1e-300)));
  p.point_ = std::move(point);
  return p;
}

const NoiseModel& PredictorSpec::output_law(long) const { return output_law_; }

const Vec& PredictorSpec::deterministic_point() const {
  require(mode_ == Mode::kDeterministic,
          "deterministic_point: predictor is stochastic");
  return point_;
}

BoxProbability PredictorSpec::step_score(const Vec& realized_noise, double eps,
                                         long budget, std::uint64_t seed) const {
  require(eps > 0.0, "step_score: eps must be > 0");
  if (mode_ == Mode::kDeterministic) {
    require(realized_noise.size() == point_.size(),
            "step_score: noise dimension mismatch");
    const double dist = (point_ - realized_noise).cwiseAbs().maxCoeff();
    return {dist <= eps ? 1.0 : 0.0, 0.0};
  }
  return output_law_.box_probability(realized_noise, eps, budget, seed);
}

Vec PredictorSpec::predict_noise(Rng& stream) const {
  if (mode_ == Mode::kDeterministic) return point_;
  return output_law_.sample(stream);
}

}  // namespace sdspred
