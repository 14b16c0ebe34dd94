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

#ifndef THREADTREE_ASYMPTOTICS_HPP_
#define THREADTREE_ASYMPTOTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "threadtree/attractiveness.hpp"

namespace threadtree {

// Deterministic sandwich lower(t) <= E[d_{k,t}] <= upper(t) for the full model,
// for t = k .. t_max (index t - k).
struct DegreeBounds {
  double alpha = 0, tau = 0, beta = 0;
  std::size_t k = 0, t_max = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  // lower(t) * (k / t)^(1/2); tends to a constant.
  std::vector<double> ratio;
  // log of the accumulated correction product C of the upper bound.
  double log_correction = 0;

  double lower_at(std::size_t t) const { return lower[t - k]; }
  double upper_at(std::size_t t) const { return upper[t - k]; }
  double ratio_at(std::size_t t) const { return ratio[t - k]; }
};

// Requires alpha > 0, 0 < tau < 1, k >= 2, t_max >= k; throws
// std::invalid_argument otherwise.
DegreeBounds degree_bound_sequences(double alpha, double tau, double beta,
                                    std::size_t k, std::size_t t_max);

// log of the bound e^{tau / (1 - tau)} on the correction constant.
double correction_bound_log(double tau);

struct DegreeCurvePoint {
  std::size_t t = 0;
  double mean = 0;
  double ci_low = 0, ci_high = 0;  // 95% normal interval for the mean
};

// Integers from k to t_max, roughly `per_decade` per factor of ten, always
// including both ends.
std::vector<std::size_t> geometric_times(std::size_t k, std::size_t t_max,
                                         std::size_t per_decade = 20);

// Mean degree of node k over `replicates` simulated threads of t_max nodes.
// Replicate r uses Rng::stream(seed, r).
std::vector<DegreeCurvePoint> monte_carlo_degree_mean(
    const ModelSpec& spec, std::size_t k, std::size_t t_max,
    std::size_t replicates, std::uint64_t seed, std::size_t jobs = 1,
    std::size_t per_decade = 20);

struct TailFit {
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

// Least-squares slope of log P(X >= x) against log x over support points
// x >= x_min. Throws std::invalid_argument with fewer than 10 such points.
TailFit tail_exponent(const std::vector<std::pair<std::size_t, double>>& ccdf,
                      std::size_t x_min);

// t,lower,upper,empirical_mean,ci_low,ci_high at the curve's time points;
// the empirical columns are empty when `curve` is.
void write_degree_curve_csv(std::ostream& out, const DegreeBounds& bounds,
                            const std::vector<DegreeCurvePoint>& curve,
                            const std::vector<std::size_t>& times);

}  // namespace threadtree

#endif  // THREADTREE_ASYMPTOTICS_HPP_
