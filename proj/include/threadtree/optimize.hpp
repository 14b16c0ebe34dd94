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

#ifndef THREADTREE_OPTIMIZE_HPP_
#define THREADTREE_OPTIMIZE_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace threadtree {

struct OptimOptions {
  // Stop when one iteration lowers the objective by less than f_tol, or when
  // the gradient infinity-norm drops below g_tol.
  double f_tol = 1e-8;
  double g_tol = 1e-6;
  std::size_t max_iterations = 500;
  // Every coordinate is kept inside [lower, upper].
  double lower = -40;
  double upper = 40;
};

struct OptimResult {
  std::vector<double> x;
  double value = 0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string method;
};

// f(x, grad) returns the objective and writes the gradient. A non-finite
// value marks x as infeasible.
using GradientFunction =
    std::function<double(std::span<const double>, std::span<double>)>;
using ValueFunction = std::function<double(std::span<const double>)>;

// BFGS with an Armijo backtracking line search on a box. Falls back to
// Nelder-Mead when the gradient at the start point is not finite.
OptimResult minimize_bfgs(const GradientFunction& f, std::vector<double> x0,
                          const OptimOptions& opts = {});

// Derivative-free simplex search.
OptimResult minimize_nelder_mead(const ValueFunction& f, std::vector<double> x0,
                                 const OptimOptions& opts = {});

}  // namespace threadtree

#endif  // THREADTREE_OPTIMIZE_HPP_
