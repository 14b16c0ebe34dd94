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

#include "threadtree/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "threadtree/parallel.hpp"

namespace threadtree {
namespace {

// Lag j in {1..t} with probability proportional to tau^j.
std::size_t sample_lag(double tau, std::size_t t, Rng& rng) {
  if (std::abs(tau - 1) < kTauOneTolerance) return 1 + rng.below(t);
  const double log_tau = std::log(tau);
  const double head = -std::expm1(static_cast<double>(t) * log_tau);
  const double v = rng.uniform_open();
  const double j = std::ceil(std::log1p(-v * head) / log_tau);
  if (!(j >= 1)) return 1;
  return std::min<std::size_t>(static_cast<std::size_t>(j), t);
}

ParentVector composition_thread(const ModelSpec& spec, std::size_t size,
                                Rng& rng, const StepObserver& observer) {
  std::vector<NodeId> parents;
  parents.reserve(size - 1);
  // Node k appears d_k times, so a uniform pick is a degree-weighted pick.
  std::vector<NodeId> endpoints;
  if (spec.alpha() > 0) endpoints.reserve(2 * size);
  const double tau = spec.tau();
  double mass_novelty = tau;  // sum_{j=1..t} tau^j, here t = 1

  parents.push_back(1);
  if (observer) observer(1, 1);
  if (spec.alpha() > 0) endpoints = {1, 2};

  for (std::size_t t = 2; t < size; ++t) {
    mass_novelty = std::abs(tau - 1) < kTauOneTolerance
                       ? static_cast<double>(t)
                       : tau * (1 + mass_novelty);
    const double mass_degree = 2 * spec.alpha() * static_cast<double>(t - 1);
    const double total = mass_degree + spec.beta() + mass_novelty;
    const double u = rng.uniform() * total;
    NodeId k;
    if (u < mass_degree) {
      k = endpoints[rng.below(endpoints.size())];
    } else if (u < mass_degree + spec.beta()) {
      k = 1;
    } else {
      k = static_cast<NodeId>(t - sample_lag(tau, t, rng) + 1);
    }
    parents.push_back(k);
    if (observer) observer(t, k);
    if (spec.alpha() > 0) {
      endpoints.push_back(k);
      endpoints.push_back(static_cast<NodeId>(t + 1));
    }
  }
  return ParentVector(std::move(parents));
}

ParentVector inverse_cdf_thread(const ModelSpec& spec, std::size_t size,
                                Rng& rng, const StepObserver& observer) {
  std::vector<NodeId> parents;
  parents.reserve(size - 1);
  std::vector<std::uint32_t> degree = {1, 1};
  std::vector<double> fresh = {spec.tau() * spec.tau(), spec.tau()};
  std::vector<double> cumulative;
  const double tau = spec.tau();

  parents.push_back(1);
  if (observer) observer(1, 1);

  for (std::size_t t = 2; t < size; ++t) {
    cumulative.resize(t);
    double running = 0;
    for (std::size_t k = 1; k <= t; ++k) {
      double f = spec.alpha() * degree[k - 1] + fresh[k - 1];
      if (k == 1) f += spec.beta();
      running += std::max(f, kPhiFloor);
      cumulative[k - 1] = running;
    }
    const double u = rng.uniform() * running;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto k = static_cast<NodeId>(
        std::min<std::size_t>(it - cumulative.begin(), t - 1) + 1);
    parents.push_back(k);
    if (observer) observer(t, k);

    ++degree[k - 1];
    degree.push_back(1);
    for (double& f : fresh) {
      f *= tau;
      if (f < std::numeric_limits<double>::min()) f = 0;
    }
    fresh.push_back(tau);
  }
  return ParentVector(std::move(parents));
}

}  // namespace

ParentVector generate_thread(const ModelSpec& spec, std::size_t size,
                             Rng& rng, ParentSampler sampler,
                             const StepObserver& observer) {
  if (size < 1) throw std::invalid_argument("generate_thread: size >= 1");
  if (size == 1) return {};
  return sampler == ParentSampler::kComposition
             ? composition_thread(spec, size, rng, observer)
             : inverse_cdf_thread(spec, size, rng, observer);
}

ThreadDataset generate_dataset(const ModelSpec& spec, const GenConfig& cfg) {
  std::size_t count = cfg.count;
  const auto* explicit_sizes = std::get_if<ExplicitSizes>(&cfg.sizes);
  if (explicit_sizes) {
    if (count == 0) count = explicit_sizes->sizes.size();
    if (count != explicit_sizes->sizes.size()) {
      throw std::invalid_argument(
          "generate_dataset: count differs from the explicit size list");
    }
  }
  if (count == 0) throw std::invalid_argument("generate_dataset: count >= 1");

  std::optional<DiscreteSampler> histogram;
  if (const auto* h = std::get_if<SizeHistogram>(&cfg.sizes)) {
    histogram.emplace(h->counts);
    if (histogram->empty()) {
      throw std::invalid_argument("generate_dataset: empty size histogram");
    }
  }

  std::vector<ParentVector> threads(count);
  parallel_for(count, cfg.jobs, [&](std::size_t i) {
    Rng rng = Rng::stream(cfg.seed, i);
    std::size_t size;
    if (explicit_sizes) {
      size = explicit_sizes->sizes[i];
    } else if (histogram) {
      size = histogram->sample(rng);
    } else {
      size = std::get<LogNormalSizes>(cfg.sizes).sample(rng);
    }
    if (size < 1) throw std::invalid_argument("generate_dataset: size >= 1");
    threads[i] = generate_thread(spec, size, rng, cfg.sampler);
  });
  return ThreadDataset(std::move(threads), "synthetic:" +
                                               std::string(to_string(spec.variant())));
}

}  // namespace threadtree
