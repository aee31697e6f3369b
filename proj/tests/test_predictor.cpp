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

#include <doctest.h>

#include <cmath>

#include "sdspred/metrics.hpp"
#include "sdspred/predictor.hpp"

using namespace sdspred;

namespace {

SystemModel gaussian_system_2d() {
  Mat cov(2, 2);
  cov << 1.0, 0.2, 0.2, 0.8;
  return SystemModel::linear(random_matrix_with_radius(2, 0.9, 17),
                             NoiseModel::gaussian((Vec(2) << 0.1, -0.3).finished(), cov));
}

}  // namespace

TEST_CASE("optimal predictor reproduces the noise law") {
  const SystemModel sys = gaussian_system_2d();
  const PredictorSpec opt = PredictorSpec::optimal(sys);
  CHECK(opt.mode() == PredictorSpec::Mode::kStochastic);
  CHECK(opt.output_law().gaussian_mean() == sys.noise.gaussian_mean());
  CHECK(opt.output_law().gaussian_cov() == sys.noise.gaussian_cov());

  // Discretized output law equals the discretized noise law on any grid, so
  // every KL term vanishes.
  const SystemModel diag = SystemModel::linear(
      Mat::Identity(2, 2) * 0.5,
      NoiseModel::gaussian(Vec::Zero(2), Mat::Identity(2, 2)));
  const PredictorSpec opt_diag = PredictorSpec::optimal(diag);
  for (double width : {0.1, 0.37, 1.0}) {
    const GridPartition grid = grid_covering(diag.noise, width);
    const DiscreteDist q = discretize(diag.noise, grid, DiscretizeMethod::kAnalytic);
    const DiscreteDist qhat =
        discretize(opt_diag.output_law(), grid, DiscretizeMethod::kAnalytic);
    CHECK(kl_divergence(q, qhat) == 0.0);
  }

  // Sampled predictions follow the noise covariance.
  Rng rng(99);
  const long n = 100000;
  Vec mean = Vec::Zero(2);
  Mat acc = Mat::Zero(2, 2);
  for (long i = 0; i < n; ++i) {
    const Vec w = opt.predict_noise(rng);
    mean += w;
    acc += w * w.transpose();
  }
  mean /= n;
  const Mat cov = acc / n - mean * mean.transpose();
  CHECK((cov - sys.noise.gaussian_cov()).norm() / sys.noise.gaussian_cov().norm() <=
        0.05);
}

TEST_CASE("mismatched gaussian predictor") {
  const SystemModel sys = gaussian_system_2d();

  const PredictorSpec same = PredictorSpec::mismatched_gaussian(sys, 0.0, 0.0);
  CHECK(same.output_law().gaussian_mean() == sys.noise.gaussian_mean());
  CHECK(same.output_law().gaussian_cov() == sys.noise.gaussian_cov());

  const PredictorSpec shifted = PredictorSpec::mismatched_gaussian(sys, 1.0, 0.0);
  CHECK(shifted.output_law().gaussian_mean()[0] ==
        doctest::Approx(sys.noise.gaussian_mean()[0] + 1.0));
  CHECK(shifted.output_law().gaussian_mean()[1] ==
        doctest::Approx(sys.noise.gaussian_mean()[1] + 1.0));

  const SystemModel unit = SystemModel::linear(
      Mat::Identity(2, 2) * 0.5,
      NoiseModel::gaussian(Vec::Zero(2), Mat::Identity(2, 2)));
  const PredictorSpec inflated = PredictorSpec::mismatched_gaussian(unit, 0.0, 1.0);
  CHECK(inflated.output_law().gaussian_cov().isApprox(2.0 * Mat::Identity(2, 2)));

  CHECK_THROWS_AS((void)PredictorSpec::mismatched_gaussian(unit, 0.0, -1.0),
                  std::domain_error);

  const SystemModel non_gaussian = SystemModel::linear(
      Mat::Identity(1, 1) * 0.5,
      NoiseModel::uniform_box(Vec::Zero(1), Vec::Ones(1)));
  CHECK_THROWS_AS((void)PredictorSpec::mismatched_gaussian(non_gaussian, 0.1, 0.0),
                  ContractViolation);
}

TEST_CASE("step score") {
  const SystemModel sys = SystemModel::linear(
      Mat::Identity(1, 1) * 0.5,
      NoiseModel::gaussian(Vec::Zero(1), Mat::Identity(1, 1)));
  const PredictorSpec opt = PredictorSpec::optimal(sys);
  CHECK(opt.step_score(Vec::Zero(1), 0.1).value ==
        doctest::Approx(0.07965567455405796).epsilon(1e-12));

  const Vec point = Vec::Constant(1, 0.4);
  const PredictorSpec det = PredictorSpec::deterministic(point);
  CHECK(det.step_score(point, 0.1).value == 1.0);
  CHECK(det.step_score(Vec::Constant(1, 0.4 + 0.2), 0.1).value == 0.0);
  CHECK(det.step_score(Vec::Constant(1, 0.45), 0.1).value == 1.0);
  CHECK_THROWS_AS((void)det.step_score(point, 0.0), ContractViolation);
}

TEST_CASE("expectation mismatch never helps") {
  const SystemModel sys = SystemModel::linear(
      Mat::Identity(1, 1) * 0.5,
      NoiseModel::gaussian(Vec::Zero(1), Mat::Identity(1, 1)));
  double prev = 1.0;
  bool first = true;
  for (double tau : {0.0, 0.5, 1.0, 1.5}) {
    const PredictorSpec pred = PredictorSpec::mismatched_gaussian(sys, tau, 0.0);
    const MetricsReport report =
        expected_rate(sys, pred, 0.1, 200, 50, 31415);
    if (!first) CHECK(report.mean_rate < prev);
    prev = report.mean_rate;
    first = false;
  }
}
