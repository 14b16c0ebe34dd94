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

#include "threadtree/attractiveness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace threadtree {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kFull:
      return "fm";
    case Variant::kNoAlpha:
      return "no-alpha";
    case Variant::kNoTau:
      return "no-tau";
    case Variant::kNoBias:
      return "no-bias";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  std::string key;
  for (char c : name) {
    key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(
                                       static_cast<unsigned char>(c))));
  }
  if (key == "fm" || key == "full") return Variant::kFull;
  if (key == "no-alpha") return Variant::kNoAlpha;
  if (key == "no-tau") return Variant::kNoTau;
  if (key == "no-bias") return Variant::kNoBias;
  throw std::invalid_argument("unknown model variant '" + std::string(name) +
                              "'");
}

ModelSpec::ModelSpec(Variant variant, double alpha, double tau, double beta)
    : variant_(variant), alpha_(alpha), tau_(tau), beta_(beta) {
  if (!std::isfinite(alpha) || alpha < 0) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
  if (!std::isfinite(beta) || beta < 0) {
    throw std::invalid_argument("beta must be finite and >= 0");
  }
  if (!(tau >= 0 && tau <= 1)) {
    throw std::invalid_argument("tau must lie in [0, 1]");
  }
  if (variant == Variant::kNoAlpha && alpha != 0) {
    throw std::invalid_argument("no-alpha requires alpha = 0");
  }
  if (variant == Variant::kNoTau && tau != 1) {
    throw std::invalid_argument("no-tau requires tau = 1");
  }
  if (variant == Variant::kNoBias && beta != 0) {
    throw std::invalid_argument("no-bias requires beta = 0");
  }
  if (alpha == 0 && beta == 0 && tau == 0) {
    throw std::invalid_argument(
        "alpha = beta = tau = 0 gives zero attractiveness everywhere");
  }
}

ModelSpec ModelSpec::constrained(Variant variant, double alpha, double tau,
                                 double beta) {
  switch (variant) {
    case Variant::kNoAlpha:
      alpha = 0;
      break;
    case Variant::kNoTau:
      tau = 1;
      break;
    case Variant::kNoBias:
      beta = 0;
      break;
    case Variant::kFull:
      break;
  }
  return ModelSpec(variant, alpha, tau, beta);
}

double novelty(double tau, std::size_t lag) {
  if (lag == 0 || tau == 1) return 1;
  if (tau == 0) return 0;
  const double v = std::exp(static_cast<double>(lag) * std::log(tau));
  return v < std::numeric_limits<double>::min() ? 0 : v;
}

double phi(const ModelSpec& spec, const StepContext& ctx, NodeId k) {
  if (k < 1 || k > ctx.t) {
    throw std::out_of_range("phi: node " + std::to_string(k) +
                            " not present at time-step " +
                            std::to_string(ctx.t));
  }
  if (ctx.degrees.size() < ctx.t) {
    throw std::invalid_argument("phi: degree snapshot shorter than t");
  }
  const double popularity = spec.alpha() * ctx.degrees[k - 1];
  const double fresh = novelty(spec.tau(), ctx.t - k + 1);
  const double bias = k == 1 ? spec.beta() : 0.0;
  return std::max(popularity + fresh + bias, kPhiFloor);
}

double novelty_mass(double tau, std::size_t t) {
  const double n = static_cast<double>(t);
  if (std::abs(tau - 1) < kTauOneTolerance) return n;
  if (tau == 0) return 0;
  // tau (tau^t - 1) / (tau - 1) written as tau (1 - tau^t) / (1 - tau).
  return tau * -std::expm1(n * std::log(tau)) / (1 - tau);
}

double normalizer(const ModelSpec& spec, std::size_t t) {
  if (t < 2) {
    throw std::out_of_range("normalizer: requires t >= 2, got " +
                            std::to_string(t));
  }
  return 2 * spec.alpha() * static_cast<double>(t - 1) + spec.beta() +
         novelty_mass(spec.tau(), t);
}

std::vector<double> step_probabilities(const ModelSpec& spec,
                                       const StepContext& ctx) {
  const double z = normalizer(spec, ctx.t);
  std::vector<double> p(ctx.t);
  for (std::size_t k = 1; k <= ctx.t; ++k) {
    p[k - 1] = phi(spec, ctx, static_cast<NodeId>(k)) / z;
  }
  return p;
}

}  // namespace threadtree
