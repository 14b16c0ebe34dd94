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

#ifndef THREADTREE_GENERATOR_HPP_
#define THREADTREE_GENERATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "threadtree/attractiveness.hpp"
#include "threadtree/random.hpp"
#include "threadtree/thread_core.hpp"

namespace threadtree {

enum class ParentSampler {
  // O(1) per step. The attractiveness decomposes into three masses (degree,
  // root bias, novelty); pick a mass, then pick uniformly among degree
  // endpoints, the root, or a truncated-geometric lag.
  kComposition,
  // O(t) per step inverse-CDF scan over the explicit phi vector. Reference
  // implementation of the step probabilities.
  kInverseCdf,
};

// Called with (t, parent) after pi_t has been drawn.
using StepObserver = std::function<void(std::size_t, NodeId)>;

// Samples one thread with exactly `size` nodes (size >= 1).
ParentVector generate_thread(const ModelSpec& spec, std::size_t size,
                             Rng& rng,
                             ParentSampler sampler = ParentSampler::kComposition,
                             const StepObserver& observer = {});

struct ExplicitSizes {
  std::vector<std::size_t> sizes;
};
struct SizeHistogram {
  std::map<std::size_t, std::size_t> counts;
};
using SizeSource = std::variant<ExplicitSizes, SizeHistogram, LogNormalSizes>;

struct GenConfig {
  // Thread count; ignored (taken from the list) for ExplicitSizes when 0.
  std::size_t count = 0;
  SizeSource sizes = ExplicitSizes{};
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  ParentSampler sampler = ParentSampler::kComposition;
};

// Thread i draws its size and structure from Rng::stream(seed, i), so the
// output is independent of the worker count.
ThreadDataset generate_dataset(const ModelSpec& spec, const GenConfig& cfg);

}  // namespace threadtree

#endif  // THREADTREE_GENERATOR_HPP_
