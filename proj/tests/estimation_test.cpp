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

#include "threadtree/estimation.hpp"
#include "threadtree/generator.hpp"

using namespace threadtree;

namespace {

ThreadDataset corpus(const ModelSpec& spec, std::size_t count, std::uint64_t seed,
                     double mu = 3.2) {
  GenConfig cfg;
  cfg.count = count;
  cfg.sizes = LogNormalSizes{mu, 0.8, 2, 2000};
  cfg.seed = seed;
  return generate_dataset(spec, cfg);
}

}  // namespace

TEST_SUITE("estimation") {
  TEST_CASE("uniform data fitted without bias") {
    const ThreadDataset data = corpus(ModelSpec::uniform(), 5000, 1, 2.5);
    FitConfig cfg;
    cfg.seed = 3;
    const FitResult r = fit(data, Variant::kNoBias, cfg);
    CHECK(r.spec.variant() == Variant::kNoBias);
    CHECK(r.spec.alpha() < 0.05);
    CHECK(r.spec.tau() > 0.95);
    CHECK(r.restarts.size() == cfg.restarts);
  }

  TEST_CASE("full model recovers its parameters") {
    const ModelSpec truth(Variant::kFull, 0.31, 0.98, std::exp(2.39));
    const ThreadDataset data = corpus(truth, 800, 2, 4.0);
    FitConfig cfg;
    cfg.seed = 4;
    const FitResult r = fit(data, Variant::kFull, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.spec.alpha() - 0.31) < 0.05);
    CHECK(std::abs(r.spec.tau() - 0.98) < 0.01);
    CHECK(std::abs(std::log(r.spec.beta()) - 2.39) < 0.2);
    for (const auto& rs : r.restarts) CHECK(r.neg_log_lik <= rs.objective + 1e-9);
  }

  TEST_CASE("nested fits never beat the full model") {
    const ThreadDataset data = corpus(ModelSpec(Variant::kFull, 0.2, 0.9, 2), 200, 5);
    FitConfig cfg;
    cfg.seed = 6;
    const auto fits = fit_all(data, cfg);
    for (Variant v : kAllVariants) {
      CHECK(fits[static_cast<std::size_t>(v)].spec.variant() == v);
      CHECK(fits[0].neg_log_lik <= fits[static_cast<std::size_t>(v)].neg_log_lik + 1e-6);
    }
  }

  TEST_CASE("degenerate datasets are rejected") {
    const ThreadDataset tiny(std::vector<ParentVector>{{1}, {}, {1}});
    CHECK_THROWS_AS(fit(tiny, Variant::kFull, FitConfig{}), std::invalid_argument);
  }

  TEST_CASE("fits are deterministic and bootstrap tables complete") {
    const ThreadDataset data = corpus(ModelSpec(Variant::kFull, 0.4, 0.8, 5), 150, 7);
    FitConfig cfg;
    cfg.seed = 8;
    cfg.bootstrap_replicates = 6;
    cfg.sample_size = 100;
    cfg.restarts = 2;
    const FitResult a = bootstrap_fit(data, Variant::kNoTau, cfg);
    cfg.jobs = 3;
    const FitResult b = bootstrap_fit(data, Variant::kNoTau, cfg);
    REQUIRE(a.replicates.size() == 6);
    std::ostringstream sa, sb;
    write_replicates_csv(sa, Variant::kNoTau, a.replicates);
    write_replicates_csv(sb, Variant::kNoTau, b.replicates);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("replicate,variant,alpha,tau,beta,neg_log_lik,converged\n", 0) == 0);
    for (const auto& r : a.replicates) CHECK(r.spec.tau() == 1);
    const BootstrapSummary s = summarize(a.replicates);
    CHECK(s.total == 6);
    CHECK(s.alpha.sd > 0);
  }

  TEST_CASE("shared resamples keep nesting per replicate") {
    const ThreadDataset data = corpus(ModelSpec(Variant::kFull, 0.3, 0.9, 6), 120, 9);
    FitConfig cfg;
    cfg.seed = 10;
    cfg.bootstrap_replicates = 4;
    cfg.restarts = 2;
    const auto fits = bootstrap_all(data, cfg);
    for (std::size_t r = 0; r < 4; ++r) {
      for (Variant v : kAllVariants) {
        const auto& rep = fits[static_cast<std::size_t>(v)].replicates[r];
        CHECK(rep.node_count == fits[0].replicates[r].node_count);
        CHECK(fits[0].replicates[r].neg_log_lik <= rep.neg_log_lik + 1e-6);
      }
    }
  }

  TEST_CASE("box draws") {
    const ParameterBox box;
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
      const ModelSpec s = box.draw(Variant::kNoBias, rng);
      REQUIRE(s.beta() == 0);
      REQUIRE(s.alpha() <= 1);
      REQUIRE(s.tau() >= 0.5);
      const ModelSpec st = box.draw_start(Variant::kFull, rng);
      REQUIRE(st.alpha() > 0);
      REQUIRE(st.tau() < 1);
      REQUIRE(st.beta() > 0);
    }
  }

  TEST_CASE("small residual experiment") {
    ResidualConfig cfg;
    cfg.variants = {Variant::kNoTau};
    cfg.thread_counts = {30, 300};
    cfg.experiments = 4;
    cfg.restarts = 2;
    cfg.seed = 11;
    cfg.sizes = LogNormalSizes{2.5, 0.7, 2, 200};
    const ResidualTable t = residual_experiment(cfg);
    CHECK(t.rows.size() == 8);
    for (const auto& row : t.rows) {
      CHECK(std::isnan(row.tau_residual));
      CHECK(std::isfinite(row.alpha_residual));
    }
    // Truths are shared across N for one experiment.
    CHECK(t.rows[0].truth == t.rows[4].truth);
    std::ostringstream os;
    write_residual_summary_csv(os, t);
    CHECK(os.str().find("no-tau") != std::string::npos);
  }
}
