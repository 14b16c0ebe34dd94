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

#include "threadtree/special.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace threadtree {
namespace {

using boost::math::quadrature::gauss_kronrod;

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Beyond this many degrees of freedom s = 1 to within 1e-7 in distribution.
constexpr double kLargeDf = 1e7;

}  // namespace

double chi_squared_sf(double x, double df) {
  if (!(df > 0)) throw std::invalid_argument("chi_squared_sf: df > 0");
  if (x <= 0) return 1;
  return boost::math::gamma_q(df / 2, x / 2);
}

double f_sf(double x, double df1, double df2) {
  if (!(df1 > 0 && df2 > 0)) throw std::invalid_argument("f_sf: df > 0");
  if (x <= 0) return 1;
  if (std::isinf(x)) return 0;
  return boost::math::cdf(
      boost::math::complement(boost::math::fisher_f(df1, df2), x));
}

double normal_range_cdf(double w, std::size_t k) {
  if (k < 2) throw std::invalid_argument("normal_range_cdf: k >= 2");
  if (w <= 0) return 0;
  const double exponent = static_cast<double>(k - 1);
  auto integrand = [&](double z) {
    const double inside = std_normal_cdf(z) - std_normal_cdf(z - w);
    return inside <= 0 ? 0.0 : std_normal_pdf(z) * std::pow(inside, exponent);
  };
  // The lower limit's standard normal factor kills the integrand below -9;
  // above 9 + w the bracket is < 1e-19. Splitting at w/2 keeps the peak
  // inside the first panel.
  const double mid = w / 2;
  double v = gauss_kronrod<double, 61>::integrate(integrand, -9.0, mid, 12,
                                                  1e-13) +
             gauss_kronrod<double, 61>::integrate(integrand, mid, 9.0 + w, 12,
                                                  1e-13);
  v *= static_cast<double>(k);
  return std::min(1.0, std::max(0.0, v));
}

double studentized_range_cdf(double q, std::size_t k, double df) {
  if (k < 2) throw std::invalid_argument("studentized_range_cdf: k >= 2");
  if (q <= 0) return 0;
  if (df == 0 || df > kLargeDf) return normal_range_cdf(q, k);
  if (!(df > 0)) throw std::invalid_argument("studentized_range_cdf: df > 0");

  // s = sqrt(chi2_df / df) has density
  // 2 (df/2)^(df/2) s^(df-1) exp(-df s^2 / 2) / Gamma(df/2).
  const double log_norm = std::log(2.0) + (df / 2) * std::log(df / 2) -
                          std::lgamma(df / 2);
  auto density = [&](double s) {
    if (s <= 0) return 0.0;
    return std::exp(log_norm + (df - 1) * std::log(s) - df * s * s / 2);
  };
  const boost::math::chi_squared chi(df);
  const double s_lo = std::sqrt(boost::math::quantile(chi, 1e-15) / df);
  const double s_hi = std::sqrt(
      boost::math::quantile(boost::math::complement(chi, 1e-15)) / df);
  auto integrand = [&](double s) { return density(s) * normal_range_cdf(q * s, k); };
  // Split at the mode of the density so each panel is unimodal.
  const double mode = df > 1 ? std::sqrt((df - 1) / df) : s_lo;
  double v = 0;
  if (mode > s_lo) {
    v += gauss_kronrod<double, 31>::integrate(integrand, s_lo, mode, 10, 1e-11);
  }
  v += gauss_kronrod<double, 31>::integrate(integrand, std::max(mode, s_lo),
                                            s_hi, 10, 1e-11);
  return std::min(1.0, std::max(0.0, v));
}

double studentized_range_quantile(double p, std::size_t k, double df) {
  if (!(p > 0 && p < 1)) {
    throw std::invalid_argument("studentized_range_quantile: p in (0, 1)");
  }
  auto f = [&](double q) { return studentized_range_cdf(q, k, df) - p; };
  double lo = 0;
  double hi = 4;
  while (f(hi) < 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e6) throw std::runtime_error("studentized_range_quantile: no bracket");
  }
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, -p, f(hi), boost::math::tools::eps_tolerance<double>(45),
      iterations);
  return (a + b) / 2;
}

}  // namespace threadtree
