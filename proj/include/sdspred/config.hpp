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
#include <optional>
#include <string>
#include <vector>

#include "sdspred/common.hpp"
#include "sdspred/noise_model.hpp"
#include "sdspred/predictor.hpp"
#include "sdspred/system_model.hpp"

namespace sdspred {

/// Flat section/key text configuration:
///
///   # comment
///   [section]
///   key = value
///
/// Values are scalars, whitespace-separated vectors, row-major matrices with
/// `;` between rows, or generator expressions like
/// `random_spd(seed=11, spectral_radius=1)`. Sections and keys keep
/// insertion order so serialization is stable.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long get_long(const std::string& section, const std::string& key) const;
  long get_long_or(const std::string& section, const std::string& key,
                   long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;
  Vec get_vec(const std::string& section, const std::string& key) const;
  Mat get_mat(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);
  void set_vec(const std::string& section, const std::string& key, const Vec& v);
  void set_mat(const std::string& section, const std::string& key, const Mat& m);

  std::string serialize() const;
  void write_file(const std::string& path) const;

  std::vector<std::string> section_names() const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;

  Section* find_section(const std::string& name);
  const Section* find_section(const std::string& name) const;
};

/// A call-shaped config value: name(arg=value, ...).
struct GeneratorExpr {
  std::string name;
  std::vector<std::pair<std::string, std::string>> args;
  double arg_double(const std::string& key, double fallback) const;
  std::uint64_t arg_u64(const std::string& key) const;
};
std::optional<GeneratorExpr> parse_generator(const std::string& value);

Vec parse_vec(const std::string& value);
Mat parse_mat(const std::string& value);
std::string vec_to_string(const Vec& v);
std::string mat_to_string(const Mat& m);

/// Noise model from a `[section]` block with keys `kind` plus `mean`/`cov`
/// (gaussian), `center`/`half_widths` (uniform box) or
/// `origin`/`cell_width`/`upper`/`weights` (grid density). `cov` accepts
/// random_spd(seed=..., spectral_radius=...).
NoiseModel noise_from_config(const Config& config, const std::string& section);
void noise_to_config(const NoiseModel& model, Config& config,
                     const std::string& section);

GridPartition partition_from_config(const Config& config,
                                    const std::string& section);

/// Linear system from `[system]` (key `F`: matrix literal or
/// random(seed=..., spectral_radius=...)) and `[noise]`.
SystemModel system_from_config(const Config& config);

/// Predictor block: `type = optimal | mismatch | deterministic` with
/// `tau`/`eta` or `point`.
PredictorSpec predictor_from_config(const Config& config,
                                    const SystemModel& system);

}  // namespace sdspred
