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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "threadtree/model_compare.hpp"
#include "threadtree/random.hpp"

using namespace threadtree;

namespace {

FitResult fake_fit(Variant v, double nll, std::uint64_t nodes = 100) {
  FitResult f;
  f.spec = ModelSpec::constrained(v, 0.3, 0.9, 2);
  f.neg_log_lik = nll;
  f.node_count = nodes;
  return f;
}

const std::vector<std::string> kLabels4 = {"a", "b", "c", "d"};

}  // namespace

TEST_SUITE("model_compare") {
  TEST_CASE("likelihood ratio test") {
    const LrtRow same = likelihood_ratio_test(fake_fit(Variant::kFull, 50),
                                              fake_fit(Variant::kNoTau, 50));
    CHECK(same.statistic == 0);
    CHECK(same.p_value == 1);
    CHECK_FALSE(same.boundary);

    const LrtRow r = likelihood_ratio_test(fake_fit(Variant::kFull, 50),
                                           fake_fit(Variant::kNoAlpha, 51.92));
    CHECK(r.statistic == doctest::Approx(3.84));
    CHECK(r.p_value == doctest::Approx(0.05004352124870519));
    CHECK(r.boundary);
    CHECK_FALSE(r.nesting_violated);

    const LrtRow bad = likelihood_ratio_test(fake_fit(Variant::kFull, 50),
                                             fake_fit(Variant::kNoBias, 49));
    CHECK(bad.nesting_violated);
    CHECK_THROWS(likelihood_ratio_test(fake_fit(Variant::kFull, 1, 10),
                                       fake_fit(Variant::kNoBias, 1, 11)));
  }

  TEST_CASE("one-way anova and tukey against a reference") {
    const std::vector<std::vector<double>> g = {{24.5, 23.5, 26.4, 27.1, 29.9},
                                                {28.4, 34.2, 29.5, 32.2, 30.1},
                                                {26.1, 28.3, 24.3, 26.2, 27.8}};
    const ComparisonReport r = anova_tukey(g, {"x", "y", "z"});
    CHECK(r.anova.f_statistic == doctest::Approx(7.137827822120864).epsilon(1e-10));
    CHECK(r.anova.p_value == doctest::Approx(0.009073317468563075).epsilon(1e-8));
    CHECK(std::abs(r.q_critical - 3.772928965726967) < 1e-6);
    const TukeyRow& xy = r.tukey[0];
    CHECK(xy.ci_low == doctest::Approx(-8.249159).epsilon(1e-6));
    CHECK(xy.ci_high == doctest::Approx(-0.950841).epsilon(1e-6));
    CHECK(r.significant(0, 1));
    CHECK(r.significant(1, 2));
    CHECK_FALSE(r.significant(0, 2));
    CHECK(r.significant(1, 0) == r.significant(0, 1));
    for (const auto& t : r.tukey) {
      CHECK((t.ci_high - t.mean_difference) == doctest::Approx(t.mean_difference - t.ci_low));
      const auto& A = r.range[t.a];
      const auto& B = r.range[t.b];
      const bool overlap = A.low <= B.high && B.low <= A.high;
      CHECK(overlap == !t.significant);
    }
  }

  TEST_CASE("identical groups") {
    std::vector<double> v = {1, 2, 3, 4, 5};
    const ComparisonReport r = anova_tukey({v, v, v, v}, kLabels4);
    CHECK(r.anova.f_statistic == 0);
    CHECK(r.anova.p_value == 1);
    for (const auto& t : r.tukey) CHECK_FALSE(t.significant);

    const ComparisonReport tie = anova_tukey({{2, 2, 2}, {2, 2, 2}}, {"a", "b"});
    CHECK(tie.exact_tie);
    CHECK(tie.anova.f_statistic == 0);
    CHECK_FALSE(tie.tukey[0].significant);
    const ComparisonReport split = anova_tukey({{2, 2, 2}, {3, 3, 3}}, {"a", "b"});
    CHECK(split.exact_tie);
    CHECK(std::isinf(split.anova.f_statistic));
    CHECK(split.tukey[0].significant);
  }

  TEST_CASE("shifted group stands out") {
    Rng rng(3);
    std::vector<std::vector<double>> g(4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (int j = 0; j < 100; ++j) g[i].push_back((i == 3 ? 10 : 0) + rng.normal());
    }
    const ComparisonReport r = anova_tukey(g, kLabels4);
    CHECK(r.anova.p_value < 1e-10);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.significant(i, 3));

    auto shifted = g;
    for (auto& grp : shifted) for (double& x : grp) x += 12345.678;
    const ComparisonReport s = anova_tukey(shifted, kLabels4);
    CHECK(s.anova.f_statistic == doctest::Approx(r.anova.f_statistic).epsilon(1e-8));
  }

  TEST_CASE("input checks") {
    CHECK_THROWS(anova_tukey({{1, 2}}, {"a"}));
    CHECK_THROWS(anova_tukey({{1, 2}, {1, 2, 3}}, {"a", "b"}));
    CHECK_THROWS(anova_tukey({{1, 2}, {1, 2}}, {"a"}));
  }

  TEST_CASE("exports") {
    const ComparisonReport r = anova_tukey({{1, 2, 3}, {2, 3, 4}}, {"fm", "no-tau"});
    std::ostringstream csv, json;
    write_range_csv(csv, r);
    write_comparison_json(json, r);
    CHECK(csv.str().rfind("variant,mean,low,high\nfm,2,", 0) == 0);
    CHECK(json.str().find("\"q_critical\"") != std::string::npos);
  }
}
