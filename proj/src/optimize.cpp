// Copyright 2026 The threadtree Authors
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

#include "threadtree/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace threadtree {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMaxStep = 4;
constexpr int kMaxBacktracks = 50;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double a) { return std::isfinite(a); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void clamp_into(std::vector<double>& x, const OptimOptions& opts) {
  for (double& v : x) v = std::clamp(v, opts.lower, opts.upper);
}

// Gradient with components that push against an active bound removed.
std::vector<double> projected(std::span<const double> x,
                              std::span<const double> g,
                              const OptimOptions& opts) {
  std::vector<double> pg(g.begin(), g.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] <= opts.lower && g[i] > 0) || (x[i] >= opts.upper && g[i] < 0)) {
      pg[i] = 0;
    }
  }
  return pg;
}

double inf_norm(std::span<const double> v) {
  double m = 0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

OptimResult minimize_bfgs(const GradientFunction& f, std::vector<double> x0,
                          const OptimOptions& opts) {
  const std::size_t n = x0.size();
  clamp_into(x0, opts);
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n);
  double fx = f(x, g);
  std::size_t evaluations = 1;
  if (!std::isfinite(fx) || !all_finite(g)) {
    ValueFunction value = [&f, n](std::span<const double> p) {
      std::vector<double> scratch(n);
      return f(p, scratch);
    };
    OptimResult r = minimize_nelder_mead(value, x, opts);
    r.evaluations += evaluations;
    return r;
  }

  // Inverse Hessian approximation, row-major.
  std::vector<double> h(n * n, 0.0);
  auto reset = [&] {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1;
  };
  reset();
  bool identity = true;
  bool first_update = true;

  OptimResult result;
  result.method = "bfgs";
  std::vector<double> p(n), x_new(n), g_new(n), s(n), y(n), hy(n);
  std::size_t iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const std::vector<double> pg = projected(x, g, opts);
    if (inf_norm(pg) < opts.g_tol) {
      result.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = 0;
      for (std::size_t j = 0; j < n; ++j) p[i] -= h[i * n + j] * pg[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if ((x[i] <= opts.lower && p[i] < 0) || (x[i] >= opts.upper && p[i] > 0)) {
        p[i] = 0;
      }
    }
    if (dot(p, pg) >= 0) {
      reset();
      identity = true;
      for (std::size_t i = 0; i < n; ++i) p[i] = -pg[i];
    }
    const double longest = inf_norm(p);
    if (longest > kMaxStep) {
      for (double& v : p) v *= kMaxStep / longest;
    }

    double step = 1;
    double f_new = fx;
    bool accepted = false;
    for (int b = 0; b < kMaxBacktracks; ++b) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * p[i];
      clamp_into(x_new, opts);
      for (std::size_t i = 0; i < n; ++i) s[i] = x_new[i] - x[i];
      f_new = f(x_new, g_new);
      ++evaluations;
      if (std::isfinite(f_new) && all_finite(g_new) &&
          f_new <= fx + kArmijo * dot(g, s)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!identity) {
        reset();
        identity = true;
        first_update = true;
        continue;
      }
      // No descent possible even along the steepest direction: the
      // objective is flat to working precision here.
      result.converged = true;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
    const double decrease = fx - f_new;
    x = x_new;
    g = g_new;
    fx = f_new;

    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (first_update) {
        const double scale = sy / dot(y, y);
        reset();
        for (std::size_t i = 0; i < n; ++i) h[i * n + i] = scale;
        first_update = false;
      }
      const double rho = 1 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        hy[i] = 0;
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) +
                          (rho * rho * yhy + rho) * s[i] * s[j];
        }
      }
      identity = false;
    }

    if (decrease < opts.f_tol) {
      result.converged = true;
      ++iter;
      break;
    }
  }
  result.x = std::move(x);
  result.value = fx;
  result.iterations = iter;
  result.evaluations = evaluations;
  return result;
}

OptimResult minimize_nelder_mead(const ValueFunction& f, std::vector<double> x0,
                                 const OptimOptions& opts) {
  const std::size_t n = x0.size();
  clamp_into(x0, opts);
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += simplex[i + 1][i] + 0.5 <= opts.upper ? 0.5 : -0.5;
  }
  std::vector<double> values(n + 1);
  std::size_t evaluations = 0;
  auto eval = [&](std::vector<double>& p) {
    clamp_into(p, opts);
    ++evaluations;
    const double v = f(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  OptimResult result;
  result.method = "nelder-mead";
  std::vector<std::size_t> order(n + 1);
  const std::size_t max_iter = std::max<std::size_t>(opts.max_iterations, 200 * n);
  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double spread = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        spread = std::max(spread, std::abs(simplex[i][j] - simplex[best][j]));
      }
    }
    if (std::isfinite(values[worst]) &&
        values[worst] - values[best] < opts.f_tol && spread < 1e-6) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
    }
    auto along = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) {
        p[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
      }
      return p;
    };

    std::vector<double> reflected = along(-1);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      std::vector<double> expanded = along(-2);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    std::vector<double> contracted = along(outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      }
      values[i] = eval(simplex[i]);
    }
  }
  const auto best_it = std::min_element(values.begin(), values.end());
  result.x = simplex[best_it - values.begin()];
  result.value = *best_it;
  result.iterations = iter;
  result.evaluations = evaluations;
  return result;
}

}  // namespace threadtree
