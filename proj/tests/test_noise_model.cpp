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

#include "sdspred/noise_model.hpp"
#include "sdspred/system_model.hpp"
#include "support/oracles.hpp"

using namespace sdspred;

namespace {

const double kSqrt3 = std::sqrt(3.0);

NoiseModel std_normal_1d() {
  return NoiseModel::gaussian(Vec::Zero(1), Mat::Identity(1, 1));
}

NoiseModel unit_uniform_1d() {
  return NoiseModel::uniform_box(Vec::Zero(1), Vec::Constant(1, kSqrt3));
}

Vec v1(double x) { return Vec::Constant(1, x); }

NoiseModel small_grid_density() {
  // Density 0.3/width on [0,1), 0.7/width on [1,2).
  GridPartition grid(Vec::Zero(1), Vec::Ones(1), Vec::Constant(1, 2.0));
  return NoiseModel::grid_density(grid, {0.3, 0.7});
}

}  // namespace

TEST_CASE("density matches closed forms") {
  CHECK(std_normal_1d().density(v1(0.0)) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(unit_uniform_1d().density(v1(0.0)) ==
        doctest::Approx(0.28867513459481287).epsilon(1e-12));
  CHECK(unit_uniform_1d().density(v1(2.0)) == 0.0);
  CHECK(small_grid_density().density(v1(1.5)) == doctest::Approx(0.7));
  CHECK(small_grid_density().density(v1(-0.5)) == 0.0);
  CHECK_THROWS_AS((void)std_normal_1d().density(Vec::Zero(2)), ContractViolation);
}

TEST_CASE("construction rejects bad parameters") {
  Mat not_spd(2, 2);
  not_spd << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS((void)NoiseModel::gaussian(Vec::Zero(2), not_spd),
                  std::domain_error);
  Mat asym(2, 2);
  asym << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS((void)NoiseModel::gaussian(Vec::Zero(2), asym), std::domain_error);
  CHECK_THROWS_AS((void)NoiseModel::uniform_box(Vec::Zero(1), v1(0.0)),
                  ContractViolation);
  GridPartition grid(Vec::Zero(1), Vec::Ones(1), Vec::Constant(1, 2.0));
  CHECK_THROWS_AS((void)NoiseModel::grid_density(grid, {0.4, 0.7}),
                  ContractViolation);  // sums to 1.1
  CHECK_THROWS_AS((void)NoiseModel::grid_density(grid, {-0.1, 1.1}),
                  ContractViolation);
}

TEST_CASE("density integrates to one") {
  // Deterministic quadrature oracle in 1-D.
  for (const NoiseModel& m :
       {std_normal_1d(), unit_uniform_1d(), small_grid_density()}) {
    auto [lo, hi] = m.support_box();
    const double total = oracle::integrate(
        [&](double x) { return m.density(v1(x)); }, lo[0] - 0.5, hi[0] + 0.5, 1e-11);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
  // Monte-Carlo self-check for a correlated 2-D gaussian: importance sample
  // from the uniform law on the support hull.
  Mat cov(2, 2);
  cov << 1.0, 0.6, 0.6, 0.9;
  const NoiseModel g = NoiseModel::gaussian(Vec::Zero(2), cov);
  auto [lo, hi] = g.support_box();
  const double volume = (hi - lo).prod();
  Rng rng(9001);
  const long n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    Vec x(2);
    for (int a = 0; a < 2; ++a) x[a] = lo[a] + (hi[a] - lo[a]) * rng.uniform();
    const double v = volume * g.density(x);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("sampling is reproducible and matches moments") {
  const NoiseModel g = NoiseModel::gaussian(Vec::Zero(2), Mat::Identity(2, 2));
  Rng a(77), b(77);
  for (int i = 0; i < 10; ++i) {
    const Vec xa = g.sample(a), xb = g.sample(b);
    CHECK(xa[0] == xb[0]);
    CHECK(xa[1] == xb[1]);
  }

  // CLT check against the analytic moments.
  const NoiseModel u = NoiseModel::uniform_box(v1(2.0), v1(0.5));
  Rng rng(123);
  const long n = 100000;
  double mean = 0.0;
  for (long i = 0; i < n; ++i) mean += u.sample(rng)[0];
  mean /= n;
  const double sd = 0.5 / kSqrt3;
  CHECK(std::abs(mean - 2.0) <= 3.0 * sd / std::sqrt(double(n)));

  Mat cov(2, 2);
  cov << 1.5, -0.4, -0.4, 0.7;
  const NoiseModel gc = NoiseModel::gaussian(Vec::Ones(2), cov);
  Mat acc = Mat::Zero(2, 2);
  Vec msum = Vec::Zero(2);
  Rng rng2(321);
  for (long i = 0; i < n; ++i) {
    const Vec x = gc.sample(rng2);
    msum += x;
    acc += x * x.transpose();
  }
  const Vec m = msum / n;
  const Mat sample_cov = acc / n - m * m.transpose();
  CHECK((sample_cov - cov).norm() / cov.norm() <= 0.05);

  // Grid densities resample their own cells.
  const NoiseModel gd = small_grid_density();
  Rng rng3(55);
  long in_upper = 0;
  for (long i = 0; i < n; ++i) in_upper += gd.sample(rng3)[0] >= 1.0;
  CHECK(std::abs(double(in_upper) / n - 0.7) <= 3.0 * std::sqrt(0.21 / n));
}

TEST_CASE("box probability: analytic kinds") {
  const NoiseModel g = std_normal_1d();
  const BoxProbability p = g.box_probability(v1(0.0), 0.1);
  // Oracle: quadrature of the normal density over the box.
  const double quad = oracle::integrate(
      [](double x) { return oracle::normal_pdf(x); }, -0.1, 0.1, 1e-13);
  CHECK(p.value == doctest::Approx(quad).epsilon(1e-10));
  CHECK(p.value == doctest::Approx(0.07965567455405796).epsilon(1e-12));
  CHECK(p.standard_error == 0.0);

  const NoiseModel u = unit_uniform_1d();
  CHECK(u.box_probability(v1(0.0), 0.1).value ==
        doctest::Approx(0.057735026918962574).epsilon(1e-12));
  CHECK(u.box_probability(v1(kSqrt3), 0.1).value ==
        doctest::Approx(0.1 / (2.0 * kSqrt3)).epsilon(1e-12));

  // Whole support.
  for (const NoiseModel& m : {g, u, small_grid_density()})
    CHECK(m.box_probability(Vec::Zero(1), 1e6, 1000).value == doctest::Approx(1.0));
}

TEST_CASE("box probability: Monte-Carlo kinds") {
  Mat cov(2, 2);
  cov << 1.0, 0.5, 0.5, 1.0;
  const NoiseModel g = NoiseModel::gaussian(Vec::Zero(2), cov);
  CHECK_THROWS_AS((void)g.box_probability(Vec::Zero(2), 0.1, 0), ConfigError);

  // Oracle for the correlated rectangle mass: condition on the first axis,
  // then quadrature over the conditional normal mass.
  const double rho = 0.5, eps = 0.25;
  const double cond_sd = std::sqrt(1.0 - rho * rho);
  const auto inner = [&](double x) {
    return oracle::normal_pdf(x) * (oracle::normal_cdf(eps, rho * x, cond_sd) -
                                    oracle::normal_cdf(-eps, rho * x, cond_sd));
  };
  const double exact = oracle::integrate(inner, -eps, eps, 1e-13);
  const BoxProbability mc = g.box_probability(Vec::Zero(2), eps, 400000, 4242);
  CHECK(mc.standard_error > 0.0);
  CHECK(std::abs(mc.value - exact) <= 4.0 * mc.standard_error);

  // Identical (seed, parameters) reproduce bit-identically.
  const BoxProbability mc2 = g.box_probability(Vec::Zero(2), eps, 400000, 4242);
  CHECK(mc.value == mc2.value);

  const NoiseModel gd = small_grid_density();
  const BoxProbability pg = gd.box_probability(v1(1.0), 0.25, 200000, 7);
  // Exact: 0.25 of the left cell's density 0.3 + 0.25 of the right's 0.7.
  CHECK(std::abs(pg.value - 0.25 * (0.3 + 0.7)) <= 4.0 * pg.standard_error);
}

TEST_CASE("box probability bounds and monotonicity in eps") {
  const NoiseModel diag = NoiseModel::gaussian(
      Vec::Ones(2), Mat((Vec(2) << 0.5, 2.0).finished().asDiagonal()));
  for (const NoiseModel& m : {diag, small_grid_density()}) {
    double prev = 0.0;
    for (double eps = 0.05; eps <= 3.2; eps *= 2.0) {
      const double p =
          m.box_probability(Vec::Constant(m.dim(), 0.4), eps, 50000).value;
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(p >= prev);  // same seed: nested indicator events
      prev = p;
    }
  }
}

TEST_CASE("product-form box probability equals per-axis product") {
  const Vec mean = (Vec(2) << 0.3, -0.2).finished();
  const Mat cov = (Vec(2) << 0.8, 1.3).finished().asDiagonal();
  const NoiseModel m = NoiseModel::gaussian(mean, cov);
  const Vec center = (Vec(2) << 0.1, 0.2).finished();
  const double eps = 0.4;
  const double expected =
      (oracle::normal_cdf(center[0] + eps, mean[0], std::sqrt(0.8)) -
       oracle::normal_cdf(center[0] - eps, mean[0], std::sqrt(0.8))) *
      (oracle::normal_cdf(center[1] + eps, mean[1], std::sqrt(1.3)) -
       oracle::normal_cdf(center[1] - eps, mean[1], std::sqrt(1.3)));
  CHECK(m.box_probability(center, eps).value ==
        doctest::Approx(expected).epsilon(1e-12));

  Rng rng(31337);
  long hits = 0;
  const long n = 200000;
  for (long i = 0; i < n; ++i)
    hits += ((m.sample(rng) - center).cwiseAbs().maxCoeff() <= eps);
  const double p_hat = double(hits) / n;
  const double se = std::sqrt(p_hat * (1 - p_hat) / n);
  CHECK(std::abs(p_hat - expected) <= 3.0 * se);
}

TEST_CASE("differential entropy closed forms") {
  CHECK(std_normal_1d().differential_entropy() ==
        doctest::Approx(1.4189385332046727).epsilon(1e-12));
  CHECK(unit_uniform_1d().differential_entropy() ==
        doctest::Approx(1.2424533248940002).epsilon(1e-12));
  CHECK(NoiseModel::gaussian(Vec::Zero(2), Mat::Identity(2, 2))
            .differential_entropy() ==
        doctest::Approx(2.8378770664093453).epsilon(1e-12));

  // Mean shift invariance; covariance scale c^2 adds d ln c.
  Mat cov(2, 2);
  cov << 1.1, 0.3, 0.3, 0.8;
  const double base = NoiseModel::gaussian(Vec::Zero(2), cov).differential_entropy();
  CHECK(NoiseModel::gaussian(Vec::Ones(2) * 42.0, cov).differential_entropy() ==
        doctest::Approx(base).epsilon(1e-12));
  const double c = 1.7;
  CHECK(NoiseModel::gaussian(Vec::Zero(2), (c * c) * cov).differential_entropy() ==
        doctest::Approx(base + 2.0 * std::log(c)).epsilon(1e-12));

  const NoiseModel gd = small_grid_density();
  CHECK(gd.differential_entropy() ==
        doctest::Approx(0.3 * std::log(1.0 / 0.3) + 0.7 * std::log(1.0 / 0.7))
            .epsilon(1e-12));
}

TEST_CASE("Monte-Carlo entropy estimator") {
  const McEstimate est = std_normal_1d().mc_differential_entropy(100000, 2024);
  CHECK(est.standard_error > 0.0);
  CHECK(std::abs(est.value - 1.4189385332046727) <= 3.0 * est.standard_error);

  // Constant integrand: exact regardless of n.
  const McEstimate u = unit_uniform_1d().mc_differential_entropy(100, 1);
  CHECK(u.value == doctest::Approx(1.2424533248940002).epsilon(1e-12));
  CHECK(u.standard_error <= 1e-12);

  const Mat cov = random_spd_with_radius(2, 1.3, 99);
  const NoiseModel g2 = NoiseModel::gaussian(Vec::Zero(2), cov);
  const McEstimate est2 = g2.mc_differential_entropy(100000, 77);
  CHECK(std::abs(est2.value - g2.differential_entropy()) <= 3.0 * est2.standard_error);

  CHECK_THROWS_AS((void)std_normal_1d().mc_differential_entropy(50, 1),
                  ContractViolation);
}

TEST_CASE("exact moments") {
  const NoiseModel u = NoiseModel::uniform_box(v1(0.5), v1(1.5));
  CHECK(u.mean()[0] == doctest::Approx(0.5));
  CHECK(u.covariance()(0, 0) == doctest::Approx(1.5 * 1.5 / 3.0).epsilon(1e-12));

  const NoiseModel gd = small_grid_density();
  // E = 0.3*0.5 + 0.7*1.5; Var = sum w (c - m)^2 + width^2/12.
  const double m = 0.3 * 0.5 + 0.7 * 1.5;
  const double var =
      0.3 * (0.5 - m) * (0.5 - m) + 0.7 * (1.5 - m) * (1.5 - m) + 1.0 / 12.0;
  CHECK(gd.mean()[0] == doctest::Approx(m).epsilon(1e-12));
  CHECK(gd.covariance()(0, 0) == doctest::Approx(var).epsilon(1e-12));
  // Quadrature cross-check of the grid-density variance.
  const double quad_var = oracle::integrate(
      [&](double x) { return (x - m) * (x - m) * gd.density(v1(x)); }, 0.0, 2.0,
      1e-12);
  CHECK(gd.covariance()(0, 0) == doctest::Approx(quad_var).epsilon(1e-9));
}

TEST_CASE("support and cdf") {
  CHECK(std_normal_1d().support_diameter() == kPosInf);
  CHECK(unit_uniform_1d().support_diameter() == doctest::Approx(2.0 * kSqrt3));
  CHECK(small_grid_density().support_diameter() == doctest::Approx(2.0));

  const NoiseModel u = unit_uniform_1d();
  CHECK(u.cdf1(-10.0) == 0.0);
  CHECK(u.cdf1(0.0) == doctest::Approx(0.5));
  CHECK(u.cdf1(10.0) == 1.0);
  CHECK(std_normal_1d().cdf1(0.0) == doctest::Approx(0.5));
  CHECK(std_normal_1d().cdf1(1.0) ==
        doctest::Approx(oracle::normal_cdf(1.0)).epsilon(1e-12));
  const NoiseModel gd = small_grid_density();
  CHECK(gd.cdf1(1.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(gd.cdf1(1.5) == doctest::Approx(0.3 + 0.35).epsilon(1e-12));
}

TEST_CASE("maximal box probability") {
  CHECK(max_box_probability(std_normal_1d(), 0.1) ==
        doctest::Approx(0.07965567455405796).epsilon(1e-12));
  CHECK(max_box_probability(unit_uniform_1d(), 0.1) ==
        doctest::Approx(0.057735026918962574).epsilon(1e-12));
  CHECK(max_box_probability(unit_uniform_1d(), 5.0) == doctest::Approx(1.0));

  // Piecewise-linear sweep beats every random center.
  const NoiseModel gd = small_grid_density();
  const double gamma = max_box_probability(gd, 0.3);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const double u = rng.uniform(-0.5, 2.5);
    CHECK(*exact_box_mass(gd, v1(u), 0.3) <= gamma + 1e-12);
  }
  // Best window sits inside the heavy cell: width 0.6 at density 0.7.
  CHECK(gamma == doctest::Approx(0.6 * 0.7).epsilon(1e-9));
}
