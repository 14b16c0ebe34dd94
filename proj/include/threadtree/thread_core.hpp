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

#ifndef THREADTREE_THREAD_CORE_HPP_
#define THREADTREE_THREAD_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace threadtree {

// Node identifiers are 1-based and equal to arrival order; node 1 is the root
// (the post that starts the discussion).
using NodeId = std::uint32_t;

// A discussion thread stored as its vector of parents. Entry t (1-based) is
// the node replied to by node t+1, so a thread of N nodes has N-1 entries.
// The constructor does not validate; use validate() or ThreadDataset.
class ParentVector {
 public:
  ParentVector() = default;
  explicit ParentVector(std::vector<NodeId> parents)
      : parents_(std::move(parents)) {}
  ParentVector(std::initializer_list<NodeId> parents) : parents_(parents) {}

  std::span<const NodeId> parents() const { return parents_; }

  // Parent of node t+1, with t 1-based.
  NodeId parent(std::size_t t) const { return parents_[t - 1]; }

  // Number of nodes, root included.
  std::size_t size() const { return parents_.size() + 1; }
  // Number of reply steps (|pi|).
  std::size_t steps() const { return parents_.size(); }

  friend bool operator==(const ParentVector&, const ParentVector&) = default;

 private:
  std::vector<NodeId> parents_;
};

struct Violation {
  std::size_t index = 0;  // 1-based position of the first bad entry
  NodeId value = 0;
  std::string reason;
};

// Returns nullopt when the vector encodes a legal growing tree.
std::optional<Violation> validate(const ParentVector& pv);

class InvalidThread : public std::invalid_argument {
 public:
  InvalidThread(std::size_t thread_index, Violation violation);
  std::size_t thread_index() const { return thread_index_; }
  const Violation& violation() const { return violation_; }

 private:
  std::size_t thread_index_;
  Violation violation_;
};

// Degree of node k at time-step t, i.e. 1 + #{m in [2, t-1] : pi_m = k} for
// k <= t and 0 otherwise. Valid for 1 <= t <= pv.size(); t = pv.size()
// gives the degrees of the completed tree.
std::uint32_t degree_at(const ParentVector& pv, NodeId k, std::size_t t);

// Degrees of nodes 1..t at time-step t (index 0 holds node 1).
std::vector<std::uint32_t> degrees_at(const ParentVector& pv, std::size_t t);

// Degrees of the completed tree. A root-only thread reports degree 1.
std::vector<std::uint32_t> final_degrees(const ParentVector& pv);

// Depth of every node, root depth 0.
std::vector<std::uint32_t> depths(const ParentVector& pv);

// Number of strict descendants of every node.
std::vector<std::uint32_t> subtree_sizes(const ParentVector& pv);

struct NodeDerived {
  std::vector<std::uint32_t> degree;
  std::vector<std::uint32_t> depth;
  std::vector<std::uint32_t> subtree_descendants;
};

NodeDerived derive(const ParentVector& pv);

// An immutable collection of validated threads. size_histogram maps a thread
// size (node count) to the number of threads of that size.
class ThreadDataset {
 public:
  ThreadDataset() = default;
  // Throws InvalidThread on the first invalid member and std::invalid_argument
  // when ids is non-empty but of the wrong length. Empty ids become "0", "1",
  // ... Uniqueness of ids is enforced at ingestion, not here.
  explicit ThreadDataset(std::vector<ParentVector> threads,
                         std::string source_label = {},
                         std::vector<std::string> ids = {});

  std::span<const ParentVector> threads() const { return threads_; }
  const ParentVector& thread(std::size_t i) const { return threads_[i]; }
  std::span<const std::string> ids() const { return ids_; }
  const std::string& source_label() const { return source_label_; }
  const std::map<std::size_t, std::size_t>& size_histogram() const {
    return size_histogram_;
  }

  std::size_t count() const { return threads_.size(); }
  bool empty() const { return threads_.empty(); }
  std::size_t total_nodes() const { return total_nodes_; }
  std::size_t max_size() const;

  // A new dataset made of threads[idx] for idx in indices (repeats allowed,
  // ids are carried over as-is).
  ThreadDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<ParentVector> threads_;
  std::vector<std::string> ids_;
  std::string source_label_;
  std::map<std::size_t, std::size_t> size_histogram_;
  std::size_t total_nodes_ = 0;
};

}  // namespace threadtree

#endif  // THREADTREE_THREAD_CORE_HPP_
