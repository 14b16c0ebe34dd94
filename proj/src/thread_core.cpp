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

#include "threadtree/thread_core.hpp"

#include <algorithm>
#include <string>

namespace threadtree {

std::optional<Violation> validate(const ParentVector& pv) {
  const auto parents = pv.parents();
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const std::size_t t = i + 1;
    const NodeId p = parents[i];
    if (t == 1 && p != 1) {
      return Violation{t, p, "pi_1 must be 1"};
    }
    if (p < 1) {
      return Violation{t, p, "parent ids are 1-based"};
    }
    if (p > t) {
      return Violation{t, p,
                       "pi_" + std::to_string(t) + " = " + std::to_string(p) +
                           " exceeds " + std::to_string(t)};
    }
  }
  return std::nullopt;
}

InvalidThread::InvalidThread(std::size_t thread_index, Violation violation)
    : std::invalid_argument("thread " + std::to_string(thread_index) +
                            ": violation at index " +
                            std::to_string(violation.index) + ": " +
                            violation.reason),
      thread_index_(thread_index),
      violation_(std::move(violation)) {}

std::uint32_t degree_at(const ParentVector& pv, NodeId k, std::size_t t) {
  if (t < 1 || t > pv.size()) {
    throw std::out_of_range("degree_at: time-step " + std::to_string(t) +
                            " outside [1, " + std::to_string(pv.size()) + "]");
  }
  if (k < 1) throw std::out_of_range("degree_at: node ids are 1-based");
  if (k > t) return 0;
  std::uint32_t d = 1;
  for (std::size_t m = 2; m + 1 <= t; ++m) {
    if (pv.parent(m) == k) ++d;
  }
  return d;
}

std::vector<std::uint32_t> degrees_at(const ParentVector& pv, std::size_t t) {
  if (t < 1 || t > pv.size()) {
    throw std::out_of_range("degrees_at: time-step " + std::to_string(t) +
                            " outside [1, " + std::to_string(pv.size()) + "]");
  }
  std::vector<std::uint32_t> d(t, 1);
  for (std::size_t m = 2; m + 1 <= t; ++m) ++d[pv.parent(m) - 1];
  return d;
}

std::vector<std::uint32_t> final_degrees(const ParentVector& pv) {
  return degrees_at(pv, pv.size());
}

std::vector<std::uint32_t> depths(const ParentVector& pv) {
  std::vector<std::uint32_t> depth(pv.size(), 0);
  for (std::size_t t = 1; t <= pv.steps(); ++t) {
    depth[t] = depth[pv.parent(t) - 1] + 1;
  }
  return depth;
}

std::vector<std::uint32_t> subtree_sizes(const ParentVector& pv) {
  std::vector<std::uint32_t> below(pv.size(), 0);
  // Children always carry larger ids than their parents, so a single reverse
  // sweep accumulates every subtree.
  for (std::size_t t = pv.steps(); t >= 1; --t) {
    below[pv.parent(t) - 1] += below[t] + 1;
  }
  return below;
}

NodeDerived derive(const ParentVector& pv) {
  return NodeDerived{final_degrees(pv), depths(pv), subtree_sizes(pv)};
}

ThreadDataset::ThreadDataset(std::vector<ParentVector> threads,
                             std::string source_label,
                             std::vector<std::string> ids)
    : threads_(std::move(threads)),
      ids_(std::move(ids)),
      source_label_(std::move(source_label)) {
  if (ids_.empty()) {
    ids_.reserve(threads_.size());
    for (std::size_t i = 0; i < threads_.size(); ++i) {
      ids_.push_back(std::to_string(i));
    }
  } else if (ids_.size() != threads_.size()) {
    throw std::invalid_argument("ThreadDataset: " +
                                std::to_string(ids_.size()) + " ids for " +
                                std::to_string(threads_.size()) + " threads");
  }
  for (std::size_t i = 0; i < threads_.size(); ++i) {
    if (auto v = validate(threads_[i])) throw InvalidThread(i, *v);
    ++size_histogram_[threads_[i].size()];
    total_nodes_ += threads_[i].size();
  }
}

std::size_t ThreadDataset::max_size() const {
  return size_histogram_.empty() ? 0 : size_histogram_.rbegin()->first;
}

ThreadDataset ThreadDataset::subset(
    std::span<const std::size_t> indices) const {
  std::vector<ParentVector> picked;
  std::vector<std::string> picked_ids;
  picked.reserve(indices.size());
  picked_ids.reserve(indices.size());
  for (std::size_t idx : indices) {
    picked.push_back(threads_.at(idx));
    picked_ids.push_back(ids_[idx]);
  }
  return ThreadDataset(std::move(picked), source_label_, std::move(picked_ids));
}

}  // namespace threadtree
