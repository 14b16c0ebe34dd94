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

#ifndef THREADTREE_ESTIMATION_HPP_
#define THREADTREE_ESTIMATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "threadtree/attractiveness.hpp"
#include "threadtree/likelihood.hpp"
#include "threadtree/random.hpp"
#include "threadtree/thread_core.hpp"

namespace threadtree {

// Box from which random restarts (and residual-experiment truths) are drawn.
struct ParameterBox {
  double alpha_lo = 0, alpha_hi = 1;
  double tau_lo = 0.5, tau_hi = 1;
  double beta_lo = 0, beta_hi = 15;

  // Uniform draw, with the pinned parameter of `variant` substituted.
  ModelSpec draw(Variant variant, Rng& rng) const;
  // As draw(), but nudged away from alpha = 0, beta = 0 and tau = 1 so the
  // point has finite optimizer coordinates.
  ModelSpec draw_start(Variant variant, Rng& rng) const;
};

struct FitConfig {
  std::size_t restarts = 5;
  std::size_t bootstrap_replicates = 100;
  // Threads per (re)sample, drawn with replacement. 0 uses the whole dataset
  // as is.
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  double f_tol = 1e-8;
  double g_tol = 1e-6;
  std::size_t max_iterations = 500;
  std::size_t jobs = 1;
  ParameterBox box;
};

struct RestartRecord {
  ModelSpec initial;
  ModelSpec final;
  double objective = 0;
  bool converged = false;
  std::size_t iterations = 0;
  std::string method;
};

struct ReplicateRecord {
  std::size_t replicate = 0;
  ModelSpec spec;
  double neg_log_lik = 0;
  std::uint64_t node_count = 0;
  bool converged = false;
};

struct ParameterSummary {
  double mean = 0;
  double sd = 0;
};

struct BootstrapSummary {
  ParameterSummary alpha, tau, beta, log_beta, neg_log_lik;
  std::size_t converged = 0;
  std::size_t total = 0;
};

struct FitResult {
  ModelSpec spec = ModelSpec::uniform();
  double neg_log_lik = 0;
  std::uint64_t node_count = 0;
  bool converged = false;
  // One row per optimizer run; extra rows come from supplied start points.
  std::vector<RestartRecord> restarts;
  // Empty for a plain fit; one row per resample for bootstrap fits.
  std::vector<ReplicateRecord> replicates;
};

// Best of `restarts` random starts plus any `extra_starts`, run on prepared
// statistics. Restart points are drawn from rng.
FitResult fit_stats(const SufficientStats& stats, Variant variant,
                    const FitConfig& cfg, Rng& rng,
                    const std::vector<ModelSpec>& extra_starts = {});

// Fits the four variants on the same statistics so that the full model is
// never worse than a nested one: the reduced optima seed the full-model
// search and are themselves admissible full-model points.
std::array<FitResult, 4> fit_nested(const SufficientStats& stats,
                                    const FitConfig& cfg, Rng& rng);

// Maximum-likelihood fit. With cfg.sample_size > 0 the fit runs on one
// resample of that many threads drawn with replacement from stream 0.
// Throws std::invalid_argument for datasets without any thread of >= 3 nodes.
FitResult fit(const ThreadDataset& data, Variant variant, const FitConfig& cfg);

// All four variants on the sample fit() would use, fitted with fit_nested.
std::array<FitResult, 4> fit_all(const ThreadDataset& data,
                                 const FitConfig& cfg);

// Replicate r resamples cfg.sample_size threads (whole-dataset size when 0)
// with replacement using Rng::stream(cfg.seed, r) and fits it. The returned
// spec is the fit on the full dataset.
FitResult bootstrap_fit(const ThreadDataset& data, Variant variant,
                        const FitConfig& cfg);

// All four variants on shared resamples (replicate r uses the same threads
// for every variant), fitted with fit_nested.
std::array<FitResult, 4> bootstrap_all(const ThreadDataset& data,
                                       const FitConfig& cfg);

BootstrapSummary summarize(const std::vector<ReplicateRecord>& replicates);

// Replicate table as CSV: replicate,variant,alpha,tau,beta,neg_log_lik,converged
void write_replicates_csv(std::ostream& out, Variant variant,
                          const std::vector<ReplicateRecord>& replicates,
                          bool header = true);

struct ResidualConfig {
  std::vector<Variant> variants = {kAllVariants.begin(), kAllVariants.end()};
  std::vector<std::size_t> thread_counts = {50, 500, 5000};
  std::size_t experiments = 100;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  ParameterBox box;
  LogNormalSizes sizes{3.4, 0.8, 2, 5000};
};

struct ResidualRow {
  Variant variant;
  std::size_t thread_count;
  std::size_t experiment;
  ModelSpec truth;
  ModelSpec estimate;
  // truth - estimate for alpha and tau; log(beta*) - log(beta_hat) for beta.
  // NaN for the variant's pinned parameter.
  double alpha_residual;
  double tau_residual;
  double log_beta_residual;
  bool converged;
};

struct ResidualQuantiles {
  Variant variant;
  std::size_t thread_count;
  std::string parameter;
  double q25, median, q75;
  double mean_abs;
  std::size_t count;
};

struct ResidualTable {
  std::vector<ResidualRow> rows;
  std::vector<ResidualQuantiles> summary;
};

// Experiment e for (variant, N) draws theta* from the box, generates N threads
// with sizes from cfg.sizes, fits, and records theta* - theta_hat.
ResidualTable residual_experiment(const ResidualConfig& cfg);

void write_residuals_csv(std::ostream& out, const ResidualTable& table);
void write_residual_summary_csv(std::ostream& out, const ResidualTable& table);

}  // namespace threadtree

#endif  // THREADTREE_ESTIMATION_HPP_
