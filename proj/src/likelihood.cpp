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

#include "threadtree/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace threadtree {
namespace {

// Neumaier compensated sum; the order of additions is fixed by the caller.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t pack(std::uint32_t degree, std::uint32_t lag, bool root) {
  return (static_cast<std::uint64_t>(degree) << 33) |
         (static_cast<std::uint64_t>(lag) << 1) | (root ? 1u : 0u);
}

SufficientStats::Entry unpack(std::uint64_t key, std::uint64_t count) {
  return {static_cast<std::uint32_t>(key >> 33),
          static_cast<std::uint32_t>((key >> 1) & 0xffffffffu), (key & 1) != 0,
          count};
}

double logistic(double c) { return 1 / (1 + std::exp(-c)); }

}  // namespace

double thread_neg_log_likelihood(const ParentVector& pv, const ModelSpec& spec) {
  if (pv.steps() < 2) return 0;
  std::vector<std::uint32_t> degree(pv.size() + 1, 0);
  degree[1] = 1;
  degree[2] = 1;
  CompensatedSum sum;
  for (std::size_t t = 2; t <= pv.steps(); ++t) {
    const NodeId k = pv.parent(t);
    double f = spec.alpha() * degree[k] + novelty(spec.tau(), t - k + 1);
    if (k == 1) f += spec.beta();
    if (!(f > kPhiFloor)) return kInf;
    sum.add(std::log(normalizer(spec, t)) - std::log(f));
    ++degree[k];
    degree[t + 1] = 1;
  }
  return sum.value();
}

LikelihoodValue neg_log_likelihood(const ThreadDataset& data,
                                   const ModelSpec& spec, bool per_thread) {
  LikelihoodValue out;
  if (per_thread) out.per_thread.reserve(data.count());
  CompensatedSum total;
  for (const ParentVector& pv : data.threads()) {
    const double v = thread_neg_log_likelihood(pv, spec);
    if (per_thread) out.per_thread.push_back(v);
    if (std::isinf(v)) out.degenerate = true;
    total.add(v);
    if (pv.steps() >= 2) out.node_count += pv.steps() - 1;
  }
  out.neg_log_lik = out.degenerate ? kInf : total.value();
  return out;
}

ObservationCache::ObservationCache(const ThreadDataset& data) {
  offsets_.reserve(data.count() + 1);
  offsets_.push_back(0);
  steps_.reserve(data.count());
  std::vector<std::uint32_t> degree;
  std::vector<std::uint64_t> scratch;
  for (const ParentVector& pv : data.threads()) {
    steps_.push_back(static_cast<std::uint32_t>(pv.steps()));
    scratch.clear();
    degree.assign(pv.size() + 1, 0);
    if (pv.steps() >= 2) {
      degree[1] = degree[2] = 1;
      for (std::size_t t = 2; t <= pv.steps(); ++t) {
        const NodeId k = pv.parent(t);
        scratch.push_back(pack(degree[k], static_cast<std::uint32_t>(t - k + 1),
                               k == 1));
        ++degree[k];
        degree[t + 1] = 1;
      }
      std::sort(scratch.begin(), scratch.end());
    }
    for (std::size_t i = 0; i < scratch.size();) {
      std::size_t j = i;
      while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
      keys_.push_back(scratch[i]);
      counts_.push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
    offsets_.push_back(keys_.size());
  }
}

SufficientStats ObservationCache::all() const {
  std::vector<std::size_t> indices(thread_count());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  return sample(indices);
}

SufficientStats ObservationCache::sample(
    std::span<const std::size_t> indices) const {
  std::vector<std::uint32_t> multiplicity(thread_count(), 0);
  std::size_t max_steps = 0;
  std::size_t approx_keys = 0;
  for (std::size_t idx : indices) {
    if (idx >= thread_count()) {
      throw std::out_of_range("ObservationCache::sample: bad thread index");
    }
    if (multiplicity[idx]++ == 0) {
      approx_keys += offsets_[idx + 1] - offsets_[idx];
    }
    max_steps = std::max<std::size_t>(max_steps, steps_[idx]);
  }

  std::unordered_map<std::uint64_t, std::uint64_t> merged;
  merged.reserve(approx_keys);
  std::vector<std::int64_t> diff(max_steps + 2, 0);
  for (std::size_t i = 0; i < thread_count(); ++i) {
    const std::uint64_t m = multiplicity[i];
    if (m == 0) continue;
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      merged[keys_[e]] += m * counts_[e];
    }
    if (steps_[i] >= 2) {
      diff[2] += static_cast<std::int64_t>(m);
      diff[steps_[i] + 1] -= static_cast<std::int64_t>(m);
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(merged.begin(),
                                                              merged.end());
  std::sort(sorted.begin(), sorted.end());
  SufficientStats stats;
  stats.entries_.reserve(sorted.size());
  for (const auto& [key, count] : sorted) {
    const auto entry = unpack(key, count);
    stats.entries_.push_back(entry);
    stats.observations_ += count;
    stats.max_lag_ = std::max(stats.max_lag_, entry.lag);
  }
  stats.steps_at_.assign(max_steps + 1, 0);
  std::int64_t running = 0;
  for (std::size_t t = 0; t <= max_steps; ++t) {
    running += diff[t];
    stats.steps_at_[t] = static_cast<std::uint64_t>(running);
  }
  return stats;
}

SufficientStats sufficient_stats(const ThreadDataset& data) {
  return ObservationCache(data).all();
}

double evaluate(const SufficientStats& stats, const ModelSpec& spec,
                NaturalGradient* grad) {
  const double alpha = spec.alpha();
  const double tau = spec.tau();
  const double beta = spec.beta();

  // powers[j] = tau^j, flushed to zero below the smallest normal.
  std::vector<double> powers(stats.max_lag() + 1);
  powers[0] = 1;
  for (std::size_t j = 1; j < powers.size(); ++j) {
    double p = powers[j - 1] * tau;
    if (p < std::numeric_limits<double>::min()) p = 0;
    powers[j] = p;
  }

  CompensatedSum log_phi;
  CompensatedSum d_alpha;
  CompensatedSum d_tau;
  CompensatedSum d_beta;
  for (const auto& e : stats.entries()) {
    const double f =
        alpha * e.degree + powers[e.lag] + (e.root ? beta : 0.0);
    if (!(f > kPhiFloor)) {
      if (grad) *grad = {kNaN, kNaN, kNaN};
      return kInf;
    }
    const double w = static_cast<double>(e.count);
    log_phi.add(w * std::log(f));
    if (grad) {
      d_alpha.add(w * e.degree / f);
      d_tau.add(w * e.lag * powers[e.lag - 1] / f);
      if (e.root) d_beta.add(w / f);
    }
  }

  // Z_t = 2 alpha (t-1) + beta + S_t with S_t = tau (1 + S_{t-1}); dS tracks
  // dS_t / dtau.
  CompensatedSum log_z;
  CompensatedSum z_alpha;
  CompensatedSum z_tau;
  CompensatedSum z_beta;
  double s = 0;
  double ds = 0;
  const auto steps_at = stats.steps_at();
  for (std::size_t t = 1; t < steps_at.size(); ++t) {
    const double next_ds = (1 + s) + tau * ds;
    s = tau * (1 + s);
    ds = next_ds;
    if (t < 2 || steps_at[t] == 0) continue;
    const double c = static_cast<double>(steps_at[t]);
    const double z = 2 * alpha * static_cast<double>(t - 1) + beta + s;
    log_z.add(c * std::log(z));
    if (grad) {
      z_alpha.add(c * 2 * static_cast<double>(t - 1) / z);
      z_tau.add(c * ds / z);
      z_beta.add(c / z);
    }
  }

  if (grad) {
    grad->alpha = z_alpha.value() - d_alpha.value();
    grad->tau = z_tau.value() - d_tau.value();
    grad->beta = z_beta.value() - d_beta.value();
  }
  return log_z.value() - log_phi.value();
}

Parameterization::Parameterization(Variant variant) : variant_(variant) {}

std::size_t Parameterization::dimension() const {
  return variant_ == Variant::kFull ? 3 : 2;
}

ModelSpec Parameterization::to_spec(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw std::invalid_argument("Parameterization: wrong coordinate count");
  }
  std::size_t i = 0;
  double alpha = 0;
  double tau = 1;
  double beta = 0;
  if (has_alpha()) alpha = std::exp(std::clamp(x[i++], -kBound, kBound));
  if (has_tau()) tau = logistic(std::clamp(x[i++], -kBound, kBound));
  if (has_beta()) beta = std::exp(std::clamp(x[i++], -kBound, kBound));
  return ModelSpec(variant_, alpha, tau, beta);
}

std::vector<double> Parameterization::from_spec(const ModelSpec& spec) const {
  auto log_or_floor = [](double v) {
    return v > 0 ? std::clamp(std::log(v), -kBound, kBound) : -kBound;
  };
  std::vector<double> x;
  if (has_alpha()) x.push_back(log_or_floor(spec.alpha()));
  if (has_tau()) {
    const double tau = spec.tau();
    double c;
    if (tau <= 0) {
      c = -kBound;
    } else if (tau >= 1) {
      c = kBound;
    } else {
      c = std::clamp(std::log(tau) - std::log1p(-tau), -kBound, kBound);
    }
    x.push_back(c);
  }
  if (has_beta()) x.push_back(log_or_floor(spec.beta()));
  return x;
}

void Parameterization::chain(std::span<const double> x,
                             const NaturalGradient& natural,
                             std::span<double> out) const {
  std::size_t i = 0;
  if (has_alpha()) {
    out[i] = std::exp(std::clamp(x[i], -kBound, kBound)) * natural.alpha;
    ++i;
  }
  if (has_tau()) {
    const double c = std::clamp(x[i], -kBound, kBound);
    out[i] = logistic(c) * logistic(-c) * natural.tau;
    ++i;
  }
  if (has_beta()) {
    out[i] = std::exp(std::clamp(x[i], -kBound, kBound)) * natural.beta;
  }
}

double Objective::value(std::span<const double> x) const {
  return evaluate(*stats_, param_.to_spec(x));
}

double Objective::value_and_gradient(std::span<const double> x,
                                     std::span<double> grad) const {
  NaturalGradient natural;
  const double v = evaluate(*stats_, param_.to_spec(x), &natural);
  param_.chain(x, natural, grad);
  return v;
}

std::vector<double> gradient(const ThreadDataset& data, const ModelSpec& spec) {
  const SufficientStats stats = sufficient_stats(data);
  const Parameterization param(spec.variant());
  const std::vector<double> x = param.from_spec(spec);
  NaturalGradient natural;
  evaluate(stats, spec, &natural);
  std::vector<double> g(param.dimension());
  param.chain(x, natural, g);
  return g;
}

}  // namespace threadtree
