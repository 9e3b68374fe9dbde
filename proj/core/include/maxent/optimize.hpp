// Copyright 2026 The MaxEnt IRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// First- and quasi-second-order maximizers for smooth concave objectives.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace maxent {

enum class OptimizerMethod { kQuasiNewton, kGradientAscent };

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::kQuasiNewton;
  int max_iters = 500;
  /// Converged once the gradient infinity-norm drops below grad_tol and the
  /// last step changed f by at most rel_tol * max(1, |f|).
  double grad_tol = 1e-6;
  double rel_tol = 1e-10;
  /// Gradient ascent: initial step, or the fixed step when the objective
  /// reports no value.
  double step_size = 1.0;
  int history = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search = 40;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

/// Writes the ascent gradient at x into `grad` and returns the objective
/// value. Returning NaN means the value is unavailable (a pure gradient
/// field); only fixed-step gradient ascent accepts that.
using Objective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct IterationRecord {
  int iteration;
  double value;
  double grad_norm;  // infinity norm
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<IterationRecord> trace;
  bool converged = false;
  std::string stop_reason;
  int evaluations = 0;
};

OptimizeResult maximize(const Objective& objective, std::vector<double> x0,
                        const OptimizerConfig& config);

}  // namespace maxent
