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
#include <numeric>
#include <sstream>

#include "threadtree/generator.hpp"
#include "threadtree/metrics.hpp"

using namespace threadtree;

namespace {

double total(const Histogram& h) {
  double s = 0;
  for (const auto& [x, p] : h) s += p;
  return s;
}

ThreadDataset fm_corpus(std::size_t count, std::uint64_t seed, double alpha = 0.31) {
  GenConfig cfg;
  cfg.count = count;
  cfg.sizes = LogNormalSizes{3.5, 0.8, 2, 3000};
  cfg.seed = seed;
  return generate_dataset(ModelSpec(Variant::kFull, alpha, 0.98, std::exp(2.39)), cfg);
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("hand-counted report") {
    const StructureReport r = structure_report(ThreadDataset(std::vector<ParentVector>{{1, 1, 2}}));
    CHECK(r.degree == Histogram{{1, 0.5}, {2, 0.5}});
    CHECK(r.subtree_size.at(0) == doctest::Approx(2.0 / 3));
    CHECK(r.subtree_size.at(1) == doctest::Approx(1.0 / 3));
    CHECK(r.size == Histogram{{4, 1.0}});
    REQUIRE(r.depth_by_size.size() == 1);
    CHECK(r.depth_by_size[0].mean_depth == doctest::Approx(1.0));
    CHECK(r.depth_by_size[0].mean_max_depth == doctest::Approx(2.0));

    const StructureReport roots = structure_report(ThreadDataset(std::vector<ParentVector>{{}, {}}));
    CHECK(roots.degree == Histogram{{1, 1.0}});
    CHECK(roots.subtree_size.empty());
  }

  TEST_CASE("histograms are normalized and degree mass matches edges") {
    const ThreadDataset data = fm_corpus(300, 1);
    const StructureReport r = structure_report(data);
    CHECK(std::abs(total(r.degree) - 1) < 1e-10);
    CHECK(std::abs(total(r.subtree_size) - 1) < 1e-10);
    CHECK(std::abs(total(r.size) - 1) < 1e-10);
    double mass = 0;
    for (const auto& [d, p] : r.degree) mass += static_cast<double>(d) * p;
    const double nodes = static_cast<double>(data.total_nodes());
    CHECK(mass == doctest::Approx(2 * (nodes - data.count()) / nodes));
    const auto c = ccdf(r.degree);
    CHECK(c.front().second == doctest::Approx(1));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].second <= c[i - 1].second);
  }

  TEST_CASE("chain and star evolution") {
    const EvolutionTrace chain = evolution_trace(ThreadDataset(std::vector<ParentVector>{{1, 2, 3}}), true);
    REQUIRE(chain.per_thread[0].size() == 4);
    for (const auto& p : chain.per_thread[0]) CHECK(p.width == 1);
    CHECK(chain.per_thread[0][3].mean_depth == doctest::Approx(1.5));

    const EvolutionTrace star = evolution_trace(ThreadDataset(std::vector<ParentVector>{{1, 1, 1}}), true);
    CHECK(star.per_thread[0][3].width == 3);
    CHECK(star.per_thread[0][3].mean_depth == doctest::Approx(0.75));

    for (std::size_t n : {5u, 40u, 300u}) {
      std::vector<NodeId> c, s;
      for (std::size_t t = 1; t < n; ++t) {
        c.push_back(static_cast<NodeId>(t));
        s.push_back(1);
      }
      const auto tc = evolution_trace(ThreadDataset({ParentVector(c)}), true);
      const auto ts = evolution_trace(ThreadDataset({ParentVector(s)}), true);
      for (std::size_t t = 1; t <= n; ++t) {
        const double td = static_cast<double>(t);
        REQUIRE(tc.per_thread[0][t - 1].width == 1);
        REQUIRE(tc.per_thread[0][t - 1].mean_depth == doctest::Approx((td - 1) / 2));
        REQUIRE(ts.per_thread[0][t - 1].width == std::max<std::size_t>(1, t - 1));
        REQUIRE(ts.per_thread[0][t - 1].mean_depth == doctest::Approx((td - 1) / td));
      }
    }
  }

  TEST_CASE("aggregates drop finished threads and widths never shrink") {
    const ThreadDataset data = fm_corpus(100, 2);
    const EvolutionTrace tr = evolution_trace(data, true);
    for (const auto& pts : tr.per_thread) {
      for (std::size_t i = 1; i < pts.size(); ++i) REQUIRE(pts[i].width >= pts[i - 1].width);
    }
    const auto* a = tr.at(10);
    REQUIRE(a != nullptr);
    std::size_t alive = 0;
    for (const auto& pv : data.threads()) alive += pv.size() >= 10;
    CHECK(a->alive == alive);
    CHECK(tr.at(data.max_size() + 1) == nullptr);
  }

  TEST_CASE("report comparison") {
    const StructureReport a = structure_report(fm_corpus(10000, 3));
    const StructureReport a2 = structure_report(fm_corpus(10000, 4));
    const ReportDivergence self = compare_reports(a, a);
    CHECK(self.degree_tv == 0);
    CHECK(self.subtree_tv == 0);
    CHECK(self.depth_gap == 0);
    CHECK(compare_reports(a, a2).degree_tv < 0.02);

    GenConfig cfg;
    cfg.count = 2000;
    cfg.sizes = LogNormalSizes{3.5, 0.8, 2, 3000};
    cfg.seed = 5;
    const StructureReport u = structure_report(generate_dataset(ModelSpec::uniform(), cfg));
    const StructureReport strong = structure_report(
        generate_dataset(ModelSpec(Variant::kFull, 5, 0.5, 0.1), cfg));
    CHECK(compare_reports(u, strong).degree_tv > 0.05);
  }

  TEST_CASE("csv tables") {
    const StructureReport r = structure_report(ThreadDataset(std::vector<ParentVector>{{1, 1, 2}, {1}}));
    std::ostringstream os;
    write_histogram_csv(os, r.degree, "degree");
    CHECK(os.str().rfind("degree,probability,ccdf\n", 0) == 0);
    std::ostringstream ev;
    write_evolution_csv(ev, evolution_trace(ThreadDataset(std::vector<ParentVector>{{1, 1, 2}})));
    CHECK(ev.str() ==
          "t,alive,mean_width,mean_depth,marker\n1,1,1,0,0\n2,1,1,0.5,0\n"
          "3,1,2,0.66666666666666663,0\n4,1,2,1,0\n");
    const auto bins = log_binned_depths(r);
    std::size_t threads = 0;
    for (const auto& b : bins) threads += b.threads;
    CHECK(threads == 2);
  }
}
