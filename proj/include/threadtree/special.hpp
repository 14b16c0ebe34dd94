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

#ifndef THREADTREE_SPECIAL_HPP_
#define THREADTREE_SPECIAL_HPP_

#include <cstddef>

namespace threadtree {

// Upper tail P(X >= x) of the chi-squared distribution with df degrees of
// freedom (regularized incomplete gamma).
double chi_squared_sf(double x, double df);

// Upper tail of Snedecor's F with (df1, df2) degrees of freedom.
double f_sf(double x, double df1, double df2);

// P(max - min of k standard normals < w).
double normal_range_cdf(double w, std::size_t k);

// CDF of the studentized range Q = range / s with k means and df degrees of
// freedom for s. df = 0 means infinite df.
double studentized_range_cdf(double q, std::size_t k, double df);

// q with studentized_range_cdf(q, k, df) = p.
double studentized_range_quantile(double p, std::size_t k, double df);

}  // namespace threadtree

#endif  // THREADTREE_SPECIAL_HPP_
