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

#include "threadtree/model_compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "threadtree/special.hpp"

namespace threadtree {
namespace {

// Tukey critical values are reused heavily (same group count and df for every
// table of a simulation), and each costs a nested quadrature root solve.
double cached_q_critical(double p, std::size_t k, double df) {
  static std::mutex mu;
  static std::map<std::tuple<double, std::size_t, double>, double> cache;
  const auto key = std::make_tuple(p, k, df);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double q = studentized_range_quantile(p, k, df);
  std::lock_guard lock(mu);
  cache.emplace(key, q);
  return q;
}

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

LrtRow likelihood_ratio_test(const FitResult& full, const FitResult& reduced) {
  if (full.node_count != reduced.node_count) {
    throw std::invalid_argument("likelihood_ratio_test: fits on different data");
  }
  const Variant v = reduced.spec.variant();
  if (v == Variant::kFull) {
    throw std::invalid_argument("likelihood_ratio_test: reduced fit is the full model");
  }
  LrtRow row;
  row.reduced = v;
  row.df = 1;
  row.statistic = 2 * (reduced.neg_log_lik - full.neg_log_lik);
  row.boundary = v == Variant::kNoAlpha || v == Variant::kNoBias;
  row.nesting_violated = row.statistic < -kNestingSlack;
  row.p_value = chi_squared_sf(std::max(0.0, row.statistic), row.df);
  return row;
}

bool ComparisonReport::significant(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  for (const auto& t : tukey) {
    if (t.a == a && t.b == b) return t.significant;
  }
  return false;
}

ComparisonReport anova_tukey(const std::vector<std::vector<double>>& groups,
                             const std::vector<std::string>& labels,
                             double level) {
  const std::size_t g = groups.size();
  if (g < 2) throw std::invalid_argument("anova_tukey: need >= 2 groups");
  if (labels.size() != g) throw std::invalid_argument("anova_tukey: label count");
  const std::size_t n = groups[0].size();
  if (n < 2) throw std::invalid_argument("anova_tukey: need >= 2 values per group");
  for (const auto& grp : groups) {
    if (grp.size() != n) throw std::invalid_argument("anova_tukey: unequal group sizes");
  }

  // Centre on the first value so a common offset cancels before squaring.
  const double shift = groups[0][0];
  std::vector<double> means(g);
  double grand = 0;
  double ssw = 0;
  bool constant_groups = true;
  for (std::size_t i = 0; i < g; ++i) {
    double sum = 0;
    for (double x : groups[i]) sum += x - shift;
    means[i] = sum / static_cast<double>(n);
    grand += means[i];
    for (double x : groups[i]) {
      const double e = (x - shift) - means[i];
      ssw += e * e;
      if (x != groups[i][0]) constant_groups = false;
    }
  }
  grand /= static_cast<double>(g);
  double ssb = 0;
  for (double m : means) ssb += static_cast<double>(n) * (m - grand) * (m - grand);

  ComparisonReport r;
  r.level = level;
  const double df_b = static_cast<double>(g - 1);
  const double df_w = static_cast<double>(g * (n - 1));
  r.anova.groups = g;
  r.anova.replicates = n;
  r.anova.ms_between = ssb / df_b;
  r.exact_tie = constant_groups;
  r.anova.ms_within = constant_groups ? 0.0 : ssw / df_w;
  if (constant_groups) {
    const bool all_equal = ssb == 0;
    r.anova.f_statistic = all_equal ? 0.0 : std::numeric_limits<double>::infinity();
    r.anova.p_value = all_equal ? 1.0 : 0.0;
  } else {
    r.anova.f_statistic = r.anova.ms_between / r.anova.ms_within;
    r.anova.p_value = f_sf(r.anova.f_statistic, df_b, df_w);
  }

  r.q_critical = cached_q_critical(1 - level, g, df_w);
  r.critical_difference =
      r.q_critical * std::sqrt(r.anova.ms_within / static_cast<double>(n));

  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = a + 1; b < g; ++b) {
      TukeyRow t;
      t.a = a;
      t.b = b;
      t.mean_difference = means[a] - means[b];
      t.ci_low = t.mean_difference - r.critical_difference;
      t.ci_high = t.mean_difference + r.critical_difference;
      t.significant = r.exact_tie ? means[a] != means[b]
                                  : std::abs(t.mean_difference) > r.critical_difference;
      r.tukey.push_back(t);
    }
  }
  for (std::size_t i = 0; i < g; ++i) {
    const double m = means[i] + shift;
    r.range.push_back({labels[i], m, m - r.critical_difference / 2,
                       m + r.critical_difference / 2});
  }
  return r;
}

ComparisonReport compare_variants(const std::array<FitResult, 4>& fits,
                                  double level) {
  // Replicates whose resample could not be fitted by some variant are dropped
  // from every group so the groups stay aligned.
  const std::size_t reps = fits[0].replicates.size();
  std::vector<std::size_t> usable;
  for (std::size_t r = 0; r < reps; ++r) {
    bool ok = true;
    for (const auto& f : fits) {
      if (f.replicates.size() != reps) {
        throw std::invalid_argument("compare_variants: replicate counts differ");
      }
      const auto& rep = f.replicates[r];
      ok = ok && rep.node_count > 0 && std::isfinite(rep.neg_log_lik);
    }
    if (ok) usable.push_back(r);
  }
  std::vector<std::vector<double>> groups;
  std::vector<std::string> labels;
  for (Variant v : kAllVariants) {
    const FitResult& f = fits[static_cast<std::size_t>(v)];
    std::vector<double> values;
    values.reserve(usable.size());
    for (std::size_t r : usable) {
      const auto& rep = f.replicates[r];
      values.push_back(rep.neg_log_lik / static_cast<double>(rep.node_count));
    }
    groups.push_back(std::move(values));
    labels.emplace_back(to_string(v));
  }
  ComparisonReport r = anova_tukey(groups, labels, level);
  const FitResult& full = fits[static_cast<std::size_t>(Variant::kFull)];
  for (Variant v : kAllVariants) {
    if (v == Variant::kFull) continue;
    r.lrt.push_back(likelihood_ratio_test(full, fits[static_cast<std::size_t>(v)]));
  }
  return r;
}

void write_range_csv(std::ostream& out, const ComparisonReport& report) {
  out << "variant,mean,low,high\n";
  char buf[256];
  for (const auto& row : report.range) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", row.label.c_str(),
                  row.mean, row.low, row.high);
    out << buf;
  }
}

void write_comparison_json(std::ostream& out, const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["lrt"] = nlohmann::ordered_json::array();
  for (const auto& row : report.lrt) {
    j["lrt"].push_back({{"variant", std::string(to_string(row.reduced))},
                        {"statistic", number(row.statistic)},
                        {"df", row.df},
                        {"p_value", number(row.p_value)},
                        {"boundary", row.boundary},
                        {"nesting_violated", row.nesting_violated}});
  }
  j["anova"] = {{"f_statistic", number(report.anova.f_statistic)},
                {"p_value", number(report.anova.p_value)},
                {"groups", report.anova.groups},
                {"replicates", report.anova.replicates},
                {"ms_between", number(report.anova.ms_between)},
                {"ms_within", number(report.anova.ms_within)}};
  j["level"] = report.level;
  j["q_critical"] = number(report.q_critical);
  j["critical_difference"] = number(report.critical_difference);
  j["exact_tie"] = report.exact_tie;
  j["tukey"] = nlohmann::ordered_json::array();
  for (const auto& t : report.tukey) {
    j["tukey"].push_back({{"a", report.range[t.a].label},
                          {"b", report.range[t.b].label},
                          {"mean_difference", number(t.mean_difference)},
                          {"ci_low", number(t.ci_low)},
                          {"ci_high", number(t.ci_high)},
                          {"significant", t.significant}});
  }
  j["range"] = nlohmann::ordered_json::array();
  for (const auto& row : report.range) {
    j["range"].push_back({{"variant", row.label},
                          {"mean", number(row.mean)},
                          {"low", number(row.low)},
                          {"high", number(row.high)}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace threadtree
