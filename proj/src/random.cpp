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

#include "threadtree/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace threadtree {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t rng_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: empty range");
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

DiscreteSampler::DiscreteSampler(
    const std::map<std::size_t, std::size_t>& counts) {
  double total = 0;
  for (auto [value, count] : counts) {
    if (count == 0) continue;
    total += static_cast<double>(count);
    values_.push_back(value);
    cumulative_.push_back(total);
  }
}

DiscreteSampler::DiscreteSampler(const std::map<std::size_t, double>& weights) {
  double total = 0;
  for (auto [value, w] : weights) {
    if (!(w >= 0) || !std::isfinite(w)) {
      throw std::invalid_argument("DiscreteSampler: weights must be >= 0");
    }
    if (w == 0) continue;
    total += w;
    values_.push_back(value);
    cumulative_.push_back(total);
  }
}

std::size_t DiscreteSampler::sample(Rng& rng) const {
  if (values_.empty()) {
    throw std::logic_error("DiscreteSampler: empty support");
  }
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(it - cumulative_.begin(),
                                         values_.size() - 1);
  return values_[idx];
}

std::size_t LogNormalSizes::sample(Rng& rng) const {
  const double x = std::exp(mu + sigma * rng.normal());
  const double clamped = std::clamp(std::round(x),
                                    static_cast<double>(min_size),
                                    static_cast<double>(max_size));
  return static_cast<std::size_t>(clamped);
}

double LogNormalSizes::mean() const {
  return std::exp(mu + sigma * sigma / 2);
}

LogNormalSizes news_site_sizes() {
  // exp(5.01 + 0.8^2 / 2) ~= 206.6 nodes per thread.
  return LogNormalSizes{5.01, 0.8, 2, 20000};
}

}  // namespace threadtree
