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

#include "threadtree/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "threadtree/generator.hpp"
#include "threadtree/parallel.hpp"
#include "threadtree/random.hpp"

namespace threadtree {

DegreeBounds degree_bound_sequences(double alpha, double tau, double beta,
                                    std::size_t k, std::size_t t_max) {
  if (!(alpha > 0)) throw std::invalid_argument("degree bounds need alpha > 0");
  if (!(tau > 0 && tau < 1)) throw std::invalid_argument("degree bounds need 0 < tau < 1");
  if (!(beta >= 0)) throw std::invalid_argument("degree bounds need beta >= 0");
  if (k < 2) throw std::invalid_argument("degree bounds need k >= 2");
  if (t_max < k) throw std::invalid_argument("degree bounds need t_max >= k");

  DegreeBounds b;
  b.alpha = alpha;
  b.tau = tau;
  b.beta = beta;
  b.k = k;
  b.t_max = t_max;
  const std::size_t n = t_max - k + 1;
  b.lower.resize(n);
  b.upper.resize(n);
  b.ratio.resize(n);

  const double geo = tau / (1 - tau);
  double log_lower = 0;
  double log_upper = 0;
  double log_novelty = std::log(tau);  // log tau^{s-k+1} at s = k
  const double log_tau = std::log(tau);
  for (std::size_t s = k;; ++s) {
    const std::size_t i = s - k;
    b.lower[i] = std::exp(log_lower);
    b.upper[i] = std::exp(log_upper);
    b.ratio[i] = b.lower[i] * std::sqrt(static_cast<double>(k) / static_cast<double>(s));
    if (s == t_max) break;
    const double base = 2 * alpha * static_cast<double>(s) + beta;
    log_lower += std::log1p(alpha / (base - 2 * alpha + geo));
    const double denom = base - 2 * alpha;
    const double correction = std::exp(log_novelty) / denom;
    log_upper += std::log1p(alpha / denom) + correction;
    b.log_correction += correction;
    log_novelty += log_tau;
  }
  return b;
}

double correction_bound_log(double tau) { return tau / (1 - tau); }

std::vector<std::size_t> geometric_times(std::size_t k, std::size_t t_max,
                                         std::size_t per_decade) {
  std::vector<std::size_t> times;
  if (t_max < k || k == 0) return times;
  const double step = std::pow(10.0, 1.0 / static_cast<double>(std::max<std::size_t>(1, per_decade)));
  double x = static_cast<double>(k);
  while (x < static_cast<double>(t_max)) {
    const auto t = static_cast<std::size_t>(std::llround(x));
    if (times.empty() || t > times.back()) times.push_back(t);
    x *= step;
  }
  if (times.empty() || times.back() != t_max) times.push_back(t_max);
  return times;
}

std::vector<DegreeCurvePoint> monte_carlo_degree_mean(
    const ModelSpec& spec, std::size_t k, std::size_t t_max,
    std::size_t replicates, std::uint64_t seed, std::size_t jobs,
    std::size_t per_decade) {
  if (k < 2 || t_max < k || replicates == 0) {
    throw std::invalid_argument("monte_carlo_degree_mean: need 2 <= k <= t_max, replicates > 0");
  }
  const std::vector<std::size_t> times = geometric_times(k, t_max, per_decade);
  std::vector<std::vector<std::uint32_t>> samples(replicates);
  parallel_for(replicates, jobs, [&](std::size_t r) {
    Rng rng = Rng::stream(seed, r);
    std::vector<std::uint32_t>& out = samples[r];
    out.reserve(times.size());
    std::uint32_t degree = 1;
    std::size_t next = 0;
    if (times[next] == k) out.push_back(degree), ++next;
    generate_thread(spec, t_max, rng, ParentSampler::kComposition,
                    [&](std::size_t t, NodeId parent) {
                      if (t < k) return;
                      if (parent == k) ++degree;
                      // Node t + 1 has just arrived.
                      if (next < times.size() && times[next] == t + 1) {
                        out.push_back(degree);
                        ++next;
                      }
                    });
  });

  std::vector<DegreeCurvePoint> curve(times.size());
  const double n = static_cast<double>(replicates);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double sum = 0, sq = 0;
    for (const auto& s : samples) {
      const double d = s[i];
      sum += d;
      sq += d * d;
    }
    const double mean = sum / n;
    const double var = replicates > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1)) : 0.0;
    const double half = 1.959963984540054 * std::sqrt(var / n);
    curve[i] = {times[i], mean, mean - half, mean + half};
  }
  return curve;
}

TailFit tail_exponent(const std::vector<std::pair<std::size_t, double>>& ccdf,
                      std::size_t x_min) {
  std::vector<double> xs, ys;
  for (const auto& [x, p] : ccdf) {
    if (x < x_min || x == 0 || !(p > 0)) continue;
    xs.push_back(std::log(static_cast<double>(x)));
    ys.push_back(std::log(p));
  }
  if (xs.size() < 10) {
    throw std::invalid_argument("tail_exponent: fewer than 10 support points above x_min");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  TailFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = xs.size();
  return fit;
}

void write_degree_curve_csv(std::ostream& out, const DegreeBounds& bounds,
                            const std::vector<DegreeCurvePoint>& curve,
                            const std::vector<std::size_t>& times) {
  out << "t,lower,upper,empirical_mean,ci_low,ci_high\n";
  char buf[256];
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::size_t t = times[i];
    int len = std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", t,
                            bounds.lower_at(t), bounds.upper_at(t));
    out.write(buf, len);
    if (i < curve.size() && curve[i].t == t) {
      len = std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", curve[i].mean,
                          curve[i].ci_low, curve[i].ci_high);
      out.write(buf, len);
    } else {
      out << ",,,\n";
    }
  }
}

}  // namespace threadtree
