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

#include <Eigen/Eigenvalues>

#include <cmath>

#include "sdspred/config.hpp"

using namespace sdspred;

TEST_CASE("config parsing") {
  const Config c = Config::parse_string(
      "# a comment\n"
      "[system]\n"
      "dim = 2\n"
      "F = 0.9 0.1; 0 0.8\n"
      "\n"
      "[experiment]\n"
      "eps = 0.1   # trailing comment\n"
      "seed = 42\n");
  CHECK(c.has_section("system"));
  CHECK_FALSE(c.has_section("noise"));
  CHECK(c.get_long("system", "dim") == 2);
  CHECK(c.get_double("experiment", "eps") == doctest::Approx(0.1));
  CHECK(c.get_u64("experiment", "seed") == 42);
  CHECK(c.get_or("experiment", "missing", "fallback") == "fallback");
  CHECK_THROWS_AS((void)c.get("experiment", "missing"), ConfigError);

  const Mat F = c.get_mat("system", "F");
  CHECK(F(0, 0) == doctest::Approx(0.9));
  CHECK(F(1, 1) == doctest::Approx(0.8));

  CHECK_THROWS_AS((void)Config::parse_string("key = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("[s]\nno_equals_here\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("[unterminated\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("[s]\nx = abc\n").get_double("s", "x"),
                  ConfigError);
}

TEST_CASE("config serialization is stable") {
  Config c;
  c.set("b_section", "z", "1");
  c.set("b_section", "a", "2");
  c.set("a_section", "k", "0.5");
  const std::string text = c.serialize();
  // Insertion order preserved, not sorted.
  CHECK(text.find("[b_section]") < text.find("[a_section]"));
  CHECK(text.find("z = 1") < text.find("a = 2"));
  const Config back = Config::parse_string(text);
  CHECK(back.serialize() == text);
}

TEST_CASE("vector and matrix literals") {
  const Vec v = parse_vec("0.5 -1  2e-3");
  REQUIRE(v.size() == 3);
  CHECK(v[2] == doctest::Approx(2e-3));
  CHECK(vec_to_string(v) == "0.5 -1 0.002");
  CHECK_THROWS_AS((void)parse_vec(""), ConfigError);
  CHECK_THROWS_AS((void)parse_mat("1 2; 3"), ConfigError);
  const Mat m = parse_mat(mat_to_string(parse_mat("1 2; 3 4")));
  CHECK(m(1, 0) == 3.0);
}

TEST_CASE("generator expressions") {
  const auto gen = parse_generator("random_spd(seed=11, spectral_radius=1.5)");
  REQUIRE(gen.has_value());
  CHECK(gen->name == "random_spd");
  CHECK(gen->arg_u64("seed") == 11);
  CHECK(gen->arg_double("spectral_radius", 0.0) == doctest::Approx(1.5));
  CHECK_FALSE(parse_generator("1 2; 3 4").has_value());
  CHECK_FALSE(parse_generator("3.5").has_value());
}

TEST_CASE("noise blocks round-trip") {
  Mat cov(2, 2);
  cov << 1.0, 0.25, 0.25, 0.7;
  const NoiseModel g = NoiseModel::gaussian((Vec(2) << 0.3, -0.1).finished(), cov);
  const NoiseModel u = NoiseModel::uniform_box(Vec::Zero(1), Vec::Constant(1, 1.7));
  GridPartition grid(Vec::Constant(1, -1.0), Vec::Constant(1, 0.5),
                     Vec::Constant(1, 1.0));
  const NoiseModel gd = NoiseModel::grid_density(grid, {0.1, 0.4, 0.3, 0.2});

  for (const NoiseModel& m : {g, u, gd}) {
    Config c;
    noise_to_config(m, c, "noise");
    const NoiseModel back = noise_from_config(c, "noise");
    CHECK(back.kind() == m.kind());
    CHECK(back.dim() == m.dim());
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      const Vec x = m.sample(rng);
      CHECK(back.density(x) == doctest::Approx(m.density(x)).epsilon(1e-12));
    }
    CHECK(back.differential_entropy() ==
          doctest::Approx(m.differential_entropy()).epsilon(1e-12));
  }
}

TEST_CASE("system and predictor blocks") {
  const Config c = Config::parse_string(
      "[system]\n"
      "dim = 2\n"
      "F = random(seed=7, spectral_radius=0.9)\n"
      "[noise]\n"
      "kind = gaussian\n"
      "mean = 0 0\n"
      "cov = random_spd(seed=11, spectral_radius=1)\n"
      "[predictor]\n"
      "type = mismatch\n"
      "tau = 1\n"
      "eta = 0.5\n");
  const SystemModel sys = system_from_config(c);
  CHECK(sys.dim == 2);
  REQUIRE(sys.linear_F.has_value());
  Eigen::EigenSolver<Mat> es(*sys.linear_F, false);
  CHECK(es.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(0.9).epsilon(1e-9));
  Eigen::SelfAdjointEigenSolver<Mat> ses(sys.noise.gaussian_cov());
  CHECK(ses.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));

  const PredictorSpec pred = predictor_from_config(c, sys);
  CHECK(pred.output_law().gaussian_mean()[0] == doctest::Approx(1.0));
  CHECK(pred.output_law().gaussian_cov()(0, 0) ==
        doctest::Approx(sys.noise.gaussian_cov()(0, 0) + 0.5));

  // Dimension disagreement is rejected.
  const Config bad = Config::parse_string(
      "[system]\ndim = 3\nF = random(seed=7, spectral_radius=0.9)\n"
      "[noise]\nkind = gaussian\nmean = 0 0\ncov = 1 0; 0 1\n");
  CHECK_THROWS_AS((void)system_from_config(bad), ConfigError);

  const Config bad_pred = Config::parse_string(
      "[system]\nF = 0.5\n[noise]\nkind = gaussian\nmean = 0\ncov = 1\n"
      "[predictor]\ntype = oracle\n");
  const SystemModel sys1 = system_from_config(bad_pred);
  CHECK_THROWS_AS((void)predictor_from_config(bad_pred, sys1), ConfigError);

  // Default predictor is the optimal one.
  const Config no_pred = Config::parse_string(
      "[system]\nF = 0.5\n[noise]\nkind = gaussian\nmean = 0\ncov = 1\n");
  const SystemModel sys2 = system_from_config(no_pred);
  const PredictorSpec opt = predictor_from_config(no_pred, sys2);
  CHECK(opt.output_law().gaussian_mean()[0] == 0.0);
}
