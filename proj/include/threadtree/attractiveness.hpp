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

#ifndef THREADTREE_ATTRACTIVENESS_HPP_
#define THREADTREE_ATTRACTIVENESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "threadtree/thread_core.hpp"

namespace threadtree {

// The full model and its three nested reductions. Each reduction pins one
// parameter of the full model: NoAlpha sets alpha = 0, NoTau sets tau = 1 and
// NoBias sets beta = 0.
enum class Variant { kFull, kNoAlpha, kNoTau, kNoBias };

inline constexpr std::array<Variant, 4> kAllVariants = {
    Variant::kFull, Variant::kNoAlpha, Variant::kNoTau, Variant::kNoBias};

// "fm", "no-alpha", "no-tau", "no-bias".
std::string_view to_string(Variant v);
// Accepts the names above (case-insensitive, '_' or '-').
Variant parse_variant(std::string_view name);

// Smallest attractiveness ever used in a probability. Nodes whose features
// all underflow are clamped here so that every step distribution is proper.
inline constexpr double kPhiFloor = 1e-300;

// Within this distance of 1 the geometric novelty sum uses its tau = 1 limit.
inline constexpr double kTauOneTolerance = 1e-9;

// A model variant together with its parameters (alpha popularity weight, tau
// novelty decay, beta root bias). Construction enforces the variant's
// constraint, the parameter ranges, and rejects alpha = beta = tau = 0.
class ModelSpec {
 public:
  // The uniform-attachment point (full model, alpha = beta = 0, tau = 1).
  ModelSpec() : ModelSpec(Variant::kFull, 0, 1, 0) {}
  // Throws std::invalid_argument when the values violate the variant.
  ModelSpec(Variant variant, double alpha, double tau, double beta);

  // Builds a spec after overwriting the variant's pinned parameter.
  static ModelSpec constrained(Variant variant, double alpha, double tau,
                               double beta);
  static ModelSpec uniform() { return ModelSpec(); }

  Variant variant() const { return variant_; }
  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  double beta() const { return beta_; }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  Variant variant_;
  double alpha_;
  double tau_;
  double beta_;
};

// Degree snapshot d_{k,t} for nodes 1..t (degrees[k-1]) before node t+1
// arrives.
struct StepContext {
  std::size_t t = 0;
  std::span<const std::uint32_t> degrees;
};

// tau^lag with underflow flushed to zero; lag >= 0.
double novelty(double tau, std::size_t lag);

// Attractiveness of node k: alpha * d_{k,t} + tau^(t-k+1) + [k == 1] * beta,
// floored at kPhiFloor.
double phi(const ModelSpec& spec, const StepContext& ctx, NodeId k);

// Sum_{j=1..t} tau^j, with the tau = 1 limit t.
double novelty_mass(double tau, std::size_t t);

// Closed-form Z_t = 2 alpha (t-1) + beta + tau (tau^t - 1) / (tau - 1);
// requires t >= 2.
double normalizer(const ModelSpec& spec, std::size_t t);

// p(pi_t = k | history) for k = 1..ctx.t.
std::vector<double> step_probabilities(const ModelSpec& spec,
                                       const StepContext& ctx);

}  // namespace threadtree

#endif  // THREADTREE_ATTRACTIVENESS_HPP_
