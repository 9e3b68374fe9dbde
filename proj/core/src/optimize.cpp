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

#include "maxent/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace maxent {
namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm(const Vec& v) { return std::sqrt(dot(v, v)); }

// A point on the minimization problem f = -objective, g = -gradient.
struct Point {
  Vec x;
  double f = 0.0;
  Vec g;
};

class Minimizer {
 public:
  Minimizer(const Objective& objective, const OptimizerConfig& config)
      : objective_(objective), config_(config) {}

  Point evaluate(Vec x) {
    project(x);
    Point p;
    p.x = std::move(x);
    p.g.assign(p.x.size(), 0.0);
    double value;
    try {
      value = objective_(p.x, p.g);
    } catch (const std::domain_error&) {
      value = -std::numeric_limits<double>::infinity();
    }
    ++evaluations_;
    p.f = -value;
    for (double& gi : p.g) gi = -gi;
    return p;
  }

  void project(Vec& x) const {
    if (config_.lower_bound) {
      for (double& xi : x) xi = std::max(xi, *config_.lower_bound);
    }
    if (config_.upper_bound) {
      for (double& xi : x) xi = std::min(xi, *config_.upper_bound);
    }
  }

  bool bounded() const {
    return config_.lower_bound.has_value() || config_.upper_bound.has_value();
  }

  Vec step(const Point& p, const Vec& d, double alpha) const {
    Vec x = p.x;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * d[i];
    return x;
  }

  // Strong Wolfe line search; returns nullopt on failure.
  std::optional<Point> wolfe_search(const Point& p, const Vec& d,
                                    double alpha0) {
    const double f0 = p.f;
    const double df0 = dot(p.g, d);
    const double c1 = config_.wolfe_c1;
    const double c2 = config_.wolfe_c2;

    double alpha_prev = 0.0;
    double f_prev = f0;
    double df_prev = df0;
    double alpha = alpha0;
    for (int i = 0; i < config_.max_line_search; ++i) {
      Point trial = evaluate(step(p, d, alpha));
      const double df = std::isfinite(trial.f) ? dot(trial.g, d) : 0.0;
      if (!std::isfinite(trial.f) || trial.f > f0 + c1 * alpha * df0 ||
          (i > 0 && trial.f >= f_prev)) {
        return zoom(p, d, alpha_prev, f_prev, df_prev, alpha, trial.f, df);
      }
      if (std::abs(df) <= -c2 * df0) return trial;
      if (df >= 0.0) {
        return zoom(p, d, alpha, trial.f, df, alpha_prev, f_prev, df_prev);
      }
      alpha_prev = alpha;
      f_prev = trial.f;
      df_prev = df;
      alpha *= 2.0;
    }
    return std::nullopt;
  }

  std::optional<Point> zoom(const Point& p, const Vec& d, double lo,
                            double f_lo, double df_lo, double hi, double f_hi,
                            double df_hi) {
    const double f0 = p.f;
    const double df0 = dot(p.g, d);
    std::optional<Point> best_lo;
    for (int j = 0; j < config_.max_line_search; ++j) {
      double alpha = interpolate(lo, f_lo, df_lo, hi, f_hi, df_hi);
      Point trial = evaluate(step(p, d, alpha));
      const double df = std::isfinite(trial.f) ? dot(trial.g, d) : 0.0;
      if (!std::isfinite(trial.f) || trial.f > f0 + config_.wolfe_c1 * alpha * df0 ||
          trial.f >= f_lo) {
        hi = alpha;
        f_hi = trial.f;
        df_hi = df;
      } else {
        if (std::abs(df) <= -config_.wolfe_c2 * df0) return trial;
        if (df * (hi - lo) >= 0.0) {
          hi = lo;
          f_hi = f_lo;
          df_hi = df_lo;
        }
        lo = alpha;
        f_lo = trial.f;
        df_lo = df;
        best_lo = std::move(trial);
      }
      if (std::abs(hi - lo) <= 1e-16 * std::max(1.0, std::abs(lo))) break;
    }
    // Sufficient decrease without curvature is still progress.
    return best_lo;
  }

  static double interpolate(double lo, double f_lo, double df_lo, double hi,
                            double f_hi, double df_hi) {
    const double left = std::min(lo, hi);
    const double right = std::max(lo, hi);
    const double width = right - left;
    double alpha = 0.5 * (lo + hi);
    if (std::isfinite(f_hi)) {
      const double d1 = df_lo + df_hi - 3.0 * (f_lo - f_hi) / (lo - hi);
      const double disc = d1 * d1 - df_lo * df_hi;
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), hi - lo);
        const double denom = df_hi - df_lo + 2.0 * d2;
        if (denom != 0.0) {
          const double cubic = hi - (hi - lo) * (df_hi + d2 - d1) / denom;
          if (std::isfinite(cubic)) alpha = cubic;
        }
      }
    }
    if (!(alpha > left + 0.1 * width && alpha < right - 0.1 * width)) {
      alpha = 0.5 * (lo + hi);
    }
    return alpha;
  }

  // Projected backtracking (Armijo) search used when box bounds are active.
  std::optional<Point> projected_search(const Point& p, const Vec& d,
                                        double alpha) {
    for (int i = 0; i < config_.max_line_search; ++i, alpha *= 0.5) {
      Point trial = evaluate(step(p, d, alpha));
      if (!std::isfinite(trial.f)) continue;
      Vec disp(p.x.size());
      for (std::size_t k = 0; k < disp.size(); ++k) disp[k] = trial.x[k] - p.x[k];
      if (inf_norm(disp) == 0.0) return std::nullopt;
      if (trial.f <= p.f + config_.wolfe_c1 * dot(p.g, disp)) return trial;
    }
    return std::nullopt;
  }

  // Zeroes components that would push through an active bound.
  void mask_active(const Point& p, Vec& d) const {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (config_.lower_bound && p.x[i] <= *config_.lower_bound && d[i] < 0.0) d[i] = 0.0;
      if (config_.upper_bound && p.x[i] >= *config_.upper_bound && d[i] > 0.0) d[i] = 0.0;
    }
  }

  Vec projected_gradient(const Point& p) const {
    Vec pg = p.g;
    for (std::size_t i = 0; i < pg.size(); ++i) {
      if (config_.lower_bound && p.x[i] <= *config_.lower_bound && pg[i] > 0.0) pg[i] = 0.0;
      if (config_.upper_bound && p.x[i] >= *config_.upper_bound && pg[i] < 0.0) pg[i] = 0.0;
    }
    return pg;
  }

  int evaluations() const { return evaluations_; }

 private:
  const Objective& objective_;
  const OptimizerConfig& config_;
  int evaluations_ = 0;
};

struct Recorder {
  OptimizeResult& result;
  void record(int iteration, const Point& p, double grad_norm) {
    result.trace.push_back({iteration, -p.f, grad_norm});
  }
};

bool small_change(double f_new, double f_old, double rel_tol) {
  return std::abs(f_new - f_old) <= rel_tol * std::max(1.0, std::abs(f_old));
}

// Converged needs a small gradient and a small last change in f. The start
// point has no previous step and counts as unchanged. Without objective
// values only the gradient is checked.
struct ConvergenceTest {
  const OptimizerConfig& config;
  bool settled = true;

  void step(double f_new, double f_old) {
    settled = std::isnan(f_new) || small_change(f_new, f_old, config.rel_tol);
  }
  bool done(double grad_norm) const { return grad_norm < config.grad_tol && settled; }
};

OptimizeResult finish(Point p, Minimizer& m, OptimizeResult result) {
  result.x = std::move(p.x);
  result.value = -p.f;
  result.gradient = std::move(p.g);
  for (double& gi : result.gradient) gi = -gi;
  result.converged = result.stop_reason == "gradient tolerance";
  result.evaluations = m.evaluations();
  return result;
}

OptimizeResult quasi_newton(const Objective& objective, Vec x0,
                            const OptimizerConfig& config) {
  Minimizer m(objective, config);
  OptimizeResult result;
  Recorder rec{result};
  Point p = m.evaluate(std::move(x0));
  if (std::isnan(p.f)) {
    throw std::invalid_argument("quasi-Newton needs objective values");
  }
  if (!std::isfinite(p.f)) {
    throw std::domain_error("objective is not finite at the starting point");
  }
  double gnorm = inf_norm(m.projected_gradient(p));
  rec.record(0, p, gnorm);

  std::deque<std::pair<Vec, Vec>> memory;  // (s, y) pairs, newest last
  ConvergenceTest test{config};
  result.stop_reason = "max iterations";
  for (int k = 1; k <= config.max_iters; ++k) {
    if (test.done(gnorm)) {
      result.stop_reason = "gradient tolerance";
      break;
    }
    // Two-loop recursion: d = -H g.
    Vec q = p.g;
    std::vector<double> rho(memory.size()), alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      rho[i] = 1.0 / dot(y, s);
      alpha[i] = rho[i] * dot(s, q);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * y[j];
    }
    if (!memory.empty()) {
      const auto& [s, y] = memory.back();
      const double scale = dot(s, y) / dot(y, y);
      for (double& v : q) v *= scale;
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = rho[i] * dot(y, q);
      for (std::size_t j = 0; j < q.size(); ++j) q[j] += s[j] * (alpha[i] - beta);
    }
    Vec d(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) d[j] = -q[j];
    if (m.bounded()) m.mask_active(p, d);
    if (dot(d, p.g) >= 0.0) {
      memory.clear();
      d = m.projected_gradient(p);
      for (double& v : d) v = -v;
    }

    const double alpha0 =
        memory.empty() ? std::min(1.0, 1.0 / std::max(two_norm(d), 1e-300)) : 1.0;
    std::optional<Point> next =
        m.bounded() ? m.projected_search(p, d, alpha0) : m.wolfe_search(p, d, alpha0);
    if (!next && !memory.empty()) {
      memory.clear();
      d = m.projected_gradient(p);
      for (double& v : d) v = -v;
      const double a0 = std::min(1.0, 1.0 / std::max(two_norm(d), 1e-300));
      next = m.bounded() ? m.projected_search(p, d, a0) : m.wolfe_search(p, d, a0);
    }
    if (!next) {
      // No ascent left from a point that already meets the gradient test.
      result.stop_reason =
          gnorm < config.grad_tol ? "gradient tolerance" : "line search failed";
      break;
    }

    Vec s(p.x.size()), y(p.x.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      s[j] = next->x[j] - p.x[j];
      y[j] = next->g[j] - p.g[j];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * two_norm(s) * two_norm(y)) {
      memory.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(memory.size()) > config.history) memory.pop_front();
    }
    const double f_old = p.f;
    p = std::move(*next);
    gnorm = inf_norm(m.projected_gradient(p));
    rec.record(k, p, gnorm);
    test.step(p.f, f_old);
    if (test.done(gnorm)) {
      result.stop_reason = "gradient tolerance";
      break;
    }
  }
  return finish(std::move(p), m, std::move(result));
}

OptimizeResult gradient_ascent(const Objective& objective, Vec x0,
                               const OptimizerConfig& config) {
  Minimizer m(objective, config);
  OptimizeResult result;
  Recorder rec{result};
  Point p = m.evaluate(std::move(x0));
  const bool has_value = !std::isnan(p.f);
  if (has_value && !std::isfinite(p.f)) {
    throw std::domain_error("objective is not finite at the starting point");
  }
  double gnorm = inf_norm(m.projected_gradient(p));
  rec.record(0, p, gnorm);

  ConvergenceTest test{config};
  result.stop_reason = "max iterations";
  for (int k = 1; k <= config.max_iters; ++k) {
    if (gnorm < config.grad_tol) {
      result.stop_reason = "gradient tolerance";
      break;
    }
    Vec d = p.g;
    for (double& v : d) v = -v;
    if (m.bounded()) m.mask_active(p, d);
    std::optional<Point> next;
    if (has_value) {
      next = m.projected_search(p, d, config.step_size);
    } else {
      next = m.evaluate(m.step(p, d, config.step_size));
    }
    if (!next) {
      // No ascent left from a point that already meets the gradient test.
      result.stop_reason =
          gnorm < config.grad_tol ? "gradient tolerance" : "line search failed";
      break;
    }
    const double f_old = p.f;
    p = std::move(*next);
    gnorm = inf_norm(m.projected_gradient(p));
    rec.record(k, p, gnorm);
    test.step(p.f, f_old);
    if (test.done(gnorm)) {
      result.stop_reason = "gradient tolerance";
      break;
    }
  }
  return finish(std::move(p), m, std::move(result));
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be > 0");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(rel_tol >= 0.0)) throw std::invalid_argument("rel_tol must be >= 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be > 0");
  if (history < 1) throw std::invalid_argument("history must be >= 1");
  if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw std::invalid_argument("need 0 < wolfe_c1 < wolfe_c2 < 1");
  }
  if (lower_bound && upper_bound && *lower_bound > *upper_bound) {
    throw std::invalid_argument("lower bound exceeds upper bound");
  }
}

OptimizeResult maximize(const Objective& objective, std::vector<double> x0,
                        const OptimizerConfig& config) {
  config.validate();
  if (config.method == OptimizerMethod::kQuasiNewton) {
    return quasi_newton(objective, std::move(x0), config);
  }
  return gradient_ascent(objective, std::move(x0), config);
}

}  // namespace maxent
