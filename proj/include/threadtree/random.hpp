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

#ifndef THREADTREE_RANDOM_HPP_
#define THREADTREE_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace threadtree {

// SplitMix64 finalizer; used to decorrelate seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed of stream `stream` under master seed `seed`. Every independent job
// (thread i of a generated dataset, bootstrap replicate r, ...) owns the
// stream rng_stream_seed(seed, r) so results do not depend on scheduling.
std::uint64_t rng_stream_seed(std::uint64_t seed, std::uint64_t stream);

// Portable random source: std::mt19937_64 (fully specified by the standard)
// with the floating-point conversions done here instead of through
// <random> distributions, whose algorithms vary between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(rng_stream_seed(seed, stream));
  }

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // Standard normal by Box-Muller (one deviate per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Draws integers from a finite weighted support, e.g. an empirical
// distribution of thread sizes.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::map<std::size_t, std::size_t>& counts);
  DiscreteSampler(const std::map<std::size_t, double>& weights);

  std::size_t sample(Rng& rng) const;
  bool empty() const { return values_.empty(); }

 private:
  std::vector<std::size_t> values_;
  std::vector<double> cumulative_;
};

// Thread sizes from a rounded log-normal clamped to [min_size, max_size].
struct LogNormalSizes {
  double mu = 0;
  double sigma = 1;
  std::size_t min_size = 2;
  std::size_t max_size = 100000;

  std::size_t sample(Rng& rng) const;
  double mean() const;
};

// Surrogate for a news-aggregator size distribution with a well defined
// scale: median about 150 nodes, mean about 207 (2,028,518 nodes over 9,820
// threads).
LogNormalSizes news_site_sizes();

}  // namespace threadtree

#endif  // THREADTREE_RANDOM_HPP_
