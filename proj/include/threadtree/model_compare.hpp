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

#ifndef THREADTREE_MODEL_COMPARE_HPP_
#define THREADTREE_MODEL_COMPARE_HPP_

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "threadtree/attractiveness.hpp"
#include "threadtree/estimation.hpp"

namespace threadtree {

// Optimizer slack tolerated before a negative LR statistic is an error.
inline constexpr double kNestingSlack = 1e-6;

struct LrtRow {
  Variant reduced = Variant::kNoAlpha;
  double statistic = 0;  // D = 2 (loglik_full - loglik_reduced)
  int df = 1;
  double p_value = 1;
  // The pinned value (alpha = 0 or beta = 0) sits on the edge of the full
  // model's parameter space, so the chi-squared reference is approximate.
  bool boundary = false;
  bool nesting_violated = false;
};

// Throws std::invalid_argument when the fits are not on the same data (node
// counts differ) or `reduced` is the full model.
LrtRow likelihood_ratio_test(const FitResult& full, const FitResult& reduced);

struct AnovaRow {
  double f_statistic = 0;
  double p_value = 1;
  std::size_t groups = 0;
  std::size_t replicates = 0;  // per group
  double ms_between = 0;
  double ms_within = 0;
};

struct TukeyRow {
  std::size_t a = 0, b = 0;  // group indices, a < b
  double mean_difference = 0;  // mean_a - mean_b
  double ci_low = 0, ci_high = 0;
  bool significant = false;
};

// Range-plot row: mean +- half the Tukey critical difference, so two rows
// overlap exactly when the pair is not significantly different.
struct RangeRow {
  std::string label;
  double mean = 0;
  double low = 0, high = 0;
};

struct ComparisonReport {
  std::vector<LrtRow> lrt;
  AnovaRow anova;
  std::vector<TukeyRow> tukey;
  std::vector<RangeRow> range;
  double level = 0.05;
  double q_critical = 0;
  double critical_difference = 0;
  // Zero within-group variance: intervals collapse and pairs are significant
  // iff their means differ.
  bool exact_tie = false;

  bool significant(std::size_t a, std::size_t b) const;
};

// One-way ANOVA followed by Tukey's HSD at family-wise level `level`.
// Requires >= 2 groups with the same number (>= 2) of values.
ComparisonReport anova_tukey(const std::vector<std::vector<double>>& groups,
                             const std::vector<std::string>& labels,
                             double level = 0.05);

// Full comparison of four bootstrap fits indexed by Variant: likelihood-ratio
// tests of every reduction against the full model on the full-data fits, then
// ANOVA/Tukey on the per-node negative log-likelihoods of the replicates.
ComparisonReport compare_variants(const std::array<FitResult, 4>& fits,
                                  double level = 0.05);

void write_range_csv(std::ostream& out, const ComparisonReport& report);
void write_comparison_json(std::ostream& out, const ComparisonReport& report);

}  // namespace threadtree

#endif  // THREADTREE_MODEL_COMPARE_HPP_
