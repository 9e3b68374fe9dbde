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

#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace maxent {

/// Log-space representation of zero.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double x) { return x == kLogZero; }

/// Streaming log-sum-exp with shift-by-max rescaling. Terms are folded in
/// insertion order, so a fixed order gives bitwise reproducible results.
class LogSumExp {
 public:
  void add(double x) {
    if (x == kLogZero) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  double value() const {
    return max_ == kLogZero ? kLogZero : max_ + std::log(sum_);
  }

 private:
  double max_ = kLogZero;
  double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> xs) {
  LogSumExp acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

inline double log_add(double a, double b) {
  LogSumExp acc;
  acc.add(a);
  acc.add(b);
  return acc.value();
}

/// log(p) with log(0) mapped to the log-space zero sentinel.
inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

/// a - b for log-space values; (-inf) - (-inf) has no meaning and throws.
inline double log_divide(double a, double b) {
  if (a == kLogZero && b == kLogZero) {
    throw std::domain_error("log_divide: (-inf) - (-inf) is undefined");
  }
  return a - b;
}

/// Scales a log-space reward by a discount power; -inf stays -inf.
inline double scale_log_reward(double weight, double reward) {
  return reward == kLogZero ? kLogZero : weight * reward;
}

}  // namespace maxent
