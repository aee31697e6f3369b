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

#include "sdspred/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdspred/csv.hpp"

namespace sdspred {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || trim(end) != "" || errno == ERANGE)
    throw ConfigError("not a number in " + where + ": '" + s + "'");
  return v;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string line;
  std::string current;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      if (!config.find_section(current))
        config.sections_.push_back({current, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    if (current.empty())
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any [section]");
    config.set(current, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

Config::Section* Config::find_section(const std::string& name) {
  for (auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

const Config::Section* Config::find_section(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

bool Config::has_section(const std::string& section) const {
  return find_section(section) != nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const Section* s = find_section(section);
  if (!s) return false;
  for (const auto& [k, v] : s->entries)
    if (k == key) return true;
  return false;
}

const std::string& Config::get(const std::string& section,
                               const std::string& key) const {
  const Section* s = find_section(section);
  if (s)
    for (const auto& [k, v] : s->entries)
      if (k == key) return v;
  throw ConfigError("missing config key [" + section + "] " + key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return to_double(get(section, key), "[" + section + "] " + key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key) const {
  return static_cast<long>(get_double(section, key));
}

long Config::get_long_or(const std::string& section, const std::string& key,
                         long fallback) const {
  return has(section, key) ? get_long(section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section,
                              const std::string& key) const {
  const std::string v = get(section, key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || trim(end) != "" || errno == ERANGE)
    throw ConfigError("not an unsigned integer in [" + section + "] " + key +
                      ": '" + v + "'");
  return parsed;
}

Vec Config::get_vec(const std::string& section, const std::string& key) const {
  return parse_vec(get(section, key));
}

Mat Config::get_mat(const std::string& section, const std::string& key) const {
  return parse_mat(get(section, key));
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  Section* s = find_section(section);
  if (!s) {
    sections_.push_back({section, {}});
    s = &sections_.back();
  }
  for (auto& [k, v] : s->entries)
    if (k == key) {
      v = value;
      return;
    }
  s->entries.emplace_back(key, value);
}

void Config::set_vec(const std::string& section, const std::string& key,
                     const Vec& v) {
  set(section, key, vec_to_string(v));
}

void Config::set_mat(const std::string& section, const std::string& key,
                     const Mat& m) {
  set(section, key, mat_to_string(m));
}

std::string Config::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& s : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << s.name << "]\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << '\n';
  }
  return out.str();
}

void Config::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << serialize();
}

std::vector<std::string> Config::section_names() const {
  std::vector<std::string> names;
  names.reserve(sections_.size());
  for (const auto& s : sections_) names.push_back(s.name);
  return names;
}

double GeneratorExpr::arg_double(const std::string& key, double fallback) const {
  for (const auto& [k, v] : args)
    if (k == key) return to_double(v, name + "(" + key + ")");
  return fallback;
}

std::uint64_t GeneratorExpr::arg_u64(const std::string& key) const {
  for (const auto& [k, v] : args)
    if (k == key) {
      errno = 0;
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
      if (end == v.c_str() || trim(end) != "" || errno == ERANGE)
        throw ConfigError("bad integer argument " + key + " in " + name);
      return parsed;
    }
  throw ConfigError("missing argument " + key + " in " + name + "(...)");
}

std::optional<GeneratorExpr> parse_generator(const std::string& value) {
  const auto open = value.find('(');
  if (open == std::string::npos || value.back() != ')') return std::nullopt;
  GeneratorExpr expr;
  expr.name = trim(value.substr(0, open));
  if (expr.name.empty() ||
      expr.name.find_first_of("0123456789+-. \t") != std::string::npos)
    return std::nullopt;
  const std::string inner = value.substr(open + 1, value.size() - open - 2);
  std::istringstream in(inner);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw ConfigError("generator argument must be key=value: '" + part + "'");
    expr.args.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
  }
  return expr;
}

Vec parse_vec(const std::string& value) {
  std::istringstream in(value);
  std::vector<double> items;
  std::string tok;
  while (in >> tok) items.push_back(to_double(tok, "vector literal"));
  if (items.empty()) throw ConfigError("empty vector literal");
  Vec v(static_cast<long>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v[static_cast<long>(i)] = items[i];
  return v;
}

Mat parse_mat(const std::string& value) {
  std::vector<Vec> rows;
  std::istringstream in(value);
  std::string row;
  while (std::getline(in, row, ';')) {
    row = trim(row);
    if (!row.empty()) rows.push_back(parse_vec(row));
  }
  if (rows.empty()) throw ConfigError("empty matrix literal");
  Mat m(static_cast<long>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw ConfigError("ragged matrix literal");
    m.row(static_cast<long>(i)) = rows[i];
  }
  return m;
}

std::string vec_to_string(const Vec& v) {
  std::string out;
  for (long i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_number(v[i]);
  }
  return out;
}

std::string mat_to_string(const Mat& m) {
  std::string out;
  for (long i = 0; i < m.rows(); ++i) {
    if (i) out += "; ";
    for (long j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_number(m(i, j));
    }
  }
  return out;
}

NoiseModel noise_from_config(const Config& config, const std::string& section) {
  const std::string kind = config.get(section, "kind");
  if (kind == "gaussian") {
    const Vec mean = config.get_vec(section, "mean");
    const std::string cov_str = config.get(section, "cov");
    Mat cov;
    if (auto gen = parse_generator(cov_str)) {
      if (gen->name != "random_spd")
        throw ConfigError("unknown covariance generator: " + gen->name);
      cov = random_spd_with_radius(static_cast<int>(mean.size()),
                                   gen->arg_double("spectral_radius", 1.0),
                                   gen->arg_u64("seed"));
    } else {
      cov = parse_mat(cov_str);
    }
    return NoiseModel::gaussian(mean, cov);
  }
  if (kind == "uniform_box") {
    return NoiseModel::uniform_box(config.get_vec(section, "center"),
                                   config.get_vec(section, "half_widths"));
  }
  if (kind == "grid_density") {
    GridPartition grid(config.get_vec(section, "origin"),
                       config.get_vec(section, "cell_width"),
                       config.get_vec(section, "upper"));
    const Vec w = config.get_vec(section, "weights");
    return NoiseModel::grid_density(
        std::move(grid), std::vector<double>(w.data(), w.data() + w.size()));
  }
  throw ConfigError("unknown noise kind '" + kind + "' in [" + section + "]");
}

void noise_to_config(const NoiseModel& model, Config& config,
                     const std::string& section) {
  switch (model.kind()) {
    case NoiseModel::Kind::kGaussian:
      config.set(section, "kind", "gaussian");
      config.set_vec(section, "mean", model.gaussian_mean());
      config.set_mat(section, "cov", model.gaussian_cov());
      return;
    case NoiseModel::Kind::kUniformBox:
      config.set(section, "kind", "uniform_box");
      config.set_vec(section, "center", model.box_center());
      config.set_vec(section, "half_widths", model.box_half_widths());
      return;
    case NoiseModel::Kind::kGridDensity: {
      config.set(section, "kind", "grid_density");
      const GridPartition& grid = model.grid_cells();
      config.set_vec(section, "origin", grid.origin());
      config.set_vec(section, "cell_width", grid.cell_width());
      config.set_vec(section, "upper", grid.covered_upper());
      const auto& w = model.grid_weights();
      Vec wv(static_cast<long>(w.size()));
      for (std::size_t i = 0; i < w.size(); ++i) wv[static_cast<long>(i)] = w[i];
      config.set_vec(section, "weights", wv);
      return;
    }
  }
}

GridPartition partition_from_config(const Config& config,
                                    const std::string& section) {
  return GridPartition(config.get_vec(section, "origin"),
                       config.get_vec(section, "cell_width"),
                       config.get_vec(section, "upper"));
}

SystemModel system_from_config(const Config& config) {
  NoiseModel noise = noise_from_config(config, "noise");
  const int d = noise.dim();
  if (config.has("system", "dim") &&
      config.get_long("system", "dim") != d)
    throw ConfigError("[system] dim disagrees with the noise dimension");
  const std::string f_str = config.get("system", "F");
  Mat F;
  if (auto gen = parse_generator(f_str)) {
    if (gen->name != "random")
      throw ConfigError("unknown F generator: " + gen->name);
    F = random_matrix_with_radius(d, gen->arg_double("spectral_radius", 0.9),
                                  gen->arg_u64("seed"));
  } else {
    F = parse_mat(f_str);
  }
  return SystemModel::linear(std::move(F), std::move(noise));
}

PredictorSpec predictor_from_config(const Config& config,
                                    const SystemModel& system) {
  const std::string type = config.get_or("predictor", "type", "optimal");
  if (type == "optimal") return PredictorSpec::optimal(system);
  if (type == "mismatch")
    return PredictorSpec::mismatched_gaussian(
        system, config.get_double_or("predictor", "tau", 0.0),
        config.get_double_or("predictor", "eta", 0.0));
  if (type == "deterministic")
    return PredictorSpec::deterministic(config.get_vec("predictor", "point"));
  throw ConfigError("unknown predictor type '" + type + "'");
}

}  // namespace sdspred
