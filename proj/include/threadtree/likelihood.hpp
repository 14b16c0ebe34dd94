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

#ifndef THREADTREE_LIKELIHOOD_HPP_
#define THREADTREE_LIKELIHOOD_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "threadtree/attractiveness.hpp"
#include "threadtree/thread_core.hpp"

namespace threadtree {

struct LikelihoodValue {
  // -log L; +infinity when an observed parent has zero attractiveness.
  double neg_log_lik = 0;
  // Filled only when requested; sums to neg_log_lik.
  std::vector<double> per_thread;
  // Number of likelihood factors, i.e. sum over threads of max(0, |pi| - 1).
  std::size_t node_count = 0;
  bool degenerate = false;

  double per_node() const {
    return node_count == 0 ? 0.0 : neg_log_lik / static_cast<double>(node_count);
  }
};

// -sum_i sum_{t>=2} [log phi(pi_{t,i}) - log Z_{t,i}] evaluated thread by
// thread, with degrees maintained incrementally. Reference path.
double thread_neg_log_likelihood(const ParentVector& pv, const ModelSpec& spec);

LikelihoodValue neg_log_likelihood(const ThreadDataset& data,
                                   const ModelSpec& spec,
                                   bool per_thread = false);

// Every likelihood factor depends on the data only through the triple
// (degree of the chosen parent, lag t - parent + 1, parent is root) and on
// the step index t through Z_t. SufficientStats holds the multiplicity of
// each distinct triple plus the number of factors at every t, so one
// evaluation costs O(#distinct triples + max size) regardless of how many
// threads the dataset holds.
class SufficientStats {
 public:
  struct Entry {
    std::uint32_t degree;
    std::uint32_t lag;
    bool root;
    std::uint64_t count;
  };

  SufficientStats() = default;

  std::span<const Entry> entries() const { return entries_; }
  // steps_at()[t] = number of factors with step index t (t >= 2).
  std::span<const std::uint64_t> steps_at() const { return steps_at_; }
  std::uint64_t observations() const { return observations_; }
  std::uint32_t max_lag() const { return max_lag_; }

 private:
  friend class ObservationCache;
  std::vector<Entry> entries_;
  std::vector<std::uint64_t> steps_at_;
  std::uint64_t observations_ = 0;
  std::uint32_t max_lag_ = 0;
};

// Per-thread observation triples, computed once per dataset. Bootstrap
// resamples are assembled from it without revisiting the parent vectors.
class ObservationCache {
 public:
  explicit ObservationCache(const ThreadDataset& data);

  SufficientStats all() const;
  // Statistics of the multiset {threads[i] : i in indices}.
  SufficientStats sample(std::span<const std::size_t> indices) const;
  std::size_t thread_count() const { return offsets_.size() - 1; }

 private:
  // Packed (degree, lag, root) keys with their per-thread counts.
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> steps_;
};

SufficientStats sufficient_stats(const ThreadDataset& data);

// Partial derivatives of -log L with respect to (alpha, tau, beta).
struct NaturalGradient {
  double alpha = 0;
  double tau = 0;
  double beta = 0;
};

// -log L from sufficient statistics. When `grad` is given it receives the
// natural-parameter gradient (NaN when the value is infinite).
double evaluate(const SufficientStats& stats, const ModelSpec& spec,
                NaturalGradient* grad = nullptr);

// Unconstrained optimizer coordinates for a variant: alpha = exp(a),
// tau = logistic(c), beta = exp(b), listed in the order (a, c, b) with the
// variant's pinned parameter omitted.
class Parameterization {
 public:
  // Coordinates are kept inside [-kBound, kBound].
  static constexpr double kBound = 40;

  explicit Parameterization(Variant variant);

  Variant variant() const { return variant_; }
  std::size_t dimension() const;
  bool has_alpha() const { return variant_ != Variant::kNoAlpha; }
  bool has_tau() const { return variant_ != Variant::kNoTau; }
  bool has_beta() const { return variant_ != Variant::kNoBias; }

  ModelSpec to_spec(std::span<const double> x) const;
  // Zero parameters map to -kBound; tau = 1 maps to +kBound.
  std::vector<double> from_spec(const ModelSpec& spec) const;
  // Chain rule from the natural gradient at x to coordinate gradient.
  void chain(std::span<const double> x, const NaturalGradient& natural,
             std::span<double> out) const;

 private:
  Variant variant_;
};

// Objective in optimizer coordinates; returns +infinity (and NaN gradient)
// where the likelihood is degenerate.
class Objective {
 public:
  Objective(const SufficientStats& stats, Variant variant)
      : stats_(&stats), param_(variant) {}

  const Parameterization& parameterization() const { return param_; }
  double value(std::span<const double> x) const;
  double value_and_gradient(std::span<const double> x,
                            std::span<double> grad) const;

 private:
  const SufficientStats* stats_;
  Parameterization param_;
};

// Analytic gradient of -log L in the variant's optimizer coordinates at spec.
std::vector<double> gradient(const ThreadDataset& data, const ModelSpec& spec);

}  // namespace threadtree

#endif  // THREADTREE_LIKELIHOOD_HPP_
