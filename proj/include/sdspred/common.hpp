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

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace sdspred {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Caller broke a documented precondition (dimension mismatch, partition
/// mismatch, trajectory/system disagreement).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A runtime configuration is unusable (bad file, zero Monte-Carlo budget
/// where one is required, unresolvable block reference).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// State left the representable range during simulation.
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Requested evaluation method does not apply to the given model kind.
class UnsupportedMethod : public std::runtime_error {
 public:
  explicit UnsupportedMethod(const std::string& what)
      : std::runtime_error(what) {}
};

/// Constrained design problem has no solution under the stated constraints.
class InfeasibleProblem : public std::runtime_error {
 public:
  explicit InfeasibleProblem(const std::string& what)
      : std::runtime_error(what) {}
};

/// Iterative solver ran out of iterations; message carries last residuals.
class ConvergenceFailure : public std::runtime_error {
 public:
  explicit ConvergenceFailure(const std::string& what)
      : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace sdspred
