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

#include "threadtree/attractiveness.hpp"
#include "threadtree/random.hpp"

using namespace threadtree;

namespace {

// Brute-force degrees of nodes 1..t from a parent prefix, straight from the
// definition: 1 + number of times k was chosen after step 1.
std::vector<std::uint32_t> brute_degrees(const std::vector<NodeId>& parents,
                                         std::size_t t) {
  std::vector<std::uint32_t> d(t, 1);
  for (std::size_t m = 2; m <= t - 1; ++m) ++d[parents[m - 1] - 1];
  return d;
}

double brute_phi(double a, double tau, double b, const std::vector<std::uint32_t>& d,
                 std::size_t t, std::size_t k) {
  double v = a * d[k - 1] + std::pow(tau, static_cast<double>(t - k + 1));
  if (k == 1) v += b;
  return v;
}

}  // namespace

TEST_SUITE("attractiveness") {
  TEST_CASE("variant names") {
    for (Variant v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
    CHECK(parse_variant("NO_ALPHA") == Variant::kNoAlpha);
    CHECK_THROWS_AS(parse_variant("nope"), std::invalid_argument);
  }

  TEST_CASE("spec constraints") {
    CHECK_THROWS_AS(ModelSpec(Variant::kNoAlpha, 0.3, 0.9, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec(Variant::kNoTau, 0.3, 0.9, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec(Variant::kNoBias, 0.3, 0.9, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec(Variant::kFull, -1, 0.9, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec(Variant::kFull, 0, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec(Variant::kFull, 0, 0, 0), std::invalid_argument);
    const ModelSpec s = ModelSpec::constrained(Variant::kNoTau, 0.3, 0.2, 4);
    CHECK(s.tau() == 1);
    CHECK(s.alpha() == 0.3);
  }

  TEST_CASE("hand-evaluated attractiveness") {
    const ModelSpec fm(Variant::kFull, 1, 0.5, 2);
    const std::vector<std::uint32_t> deg{1, 1};
    const StepContext ctx{2, deg};
    CHECK(phi(fm, ctx, 1) == doctest::Approx(3.25));
    CHECK(phi(fm, ctx, 2) == doctest::Approx(1.5));
    CHECK(normalizer(fm, 2) == doctest::Approx(4.75));
    const auto p = step_probabilities(fm, ctx);
    CHECK(p[0] == doctest::Approx(3.25 / 4.75));
    CHECK(p[1] == doctest::Approx(1.5 / 4.75));
    CHECK(p[0] == doctest::Approx(0.6842).epsilon(1e-4));
  }

  TEST_CASE("uniform and no-tau forms") {
    const ModelSpec u = ModelSpec::uniform();
    const std::vector<std::uint32_t> deg{3, 1, 2, 1, 1};
    const StepContext ctx{5, deg};
    for (NodeId k = 1; k <= 5; ++k) CHECK(phi(u, ctx, k) == 1.0);
    for (double p : step_probabilities(u, ctx)) CHECK(p == doctest::Approx(0.2));
    CHECK(normalizer(u, 17) == doctest::Approx(17));

    const double beta = std::exp(2.39);
    const ModelSpec nt(Variant::kNoTau, 0.31, 1, beta);
    CHECK(phi(nt, ctx, 1) == doctest::Approx(0.31 * 3 + beta + 1));
    CHECK(phi(nt, ctx, 3) == doctest::Approx(0.31 * 2 + 1));
  }

  TEST_CASE("tau limit continuity") {
    const ModelSpec a(Variant::kFull, 0.4, 1 - 1e-12, 3);
    const ModelSpec b(Variant::kFull, 0.4, 1, 3);
    for (std::size_t t : {2u, 10u, 1000u, 100000u}) {
      CHECK(std::abs(normalizer(a, t) - normalizer(b, t)) / normalizer(b, t) < 1e-6);
    }
    CHECK_THROWS(normalizer(b, 1));
  }

  TEST_CASE("normalizer equals brute-force sum") {
    Rng rng(2024);
    for (int rep = 0; rep < 1000; ++rep) {
      const Variant v = kAllVariants[rng.below(4)];
      const double a = rng.uniform(0, 2), tau = rng.uniform(0, 1), b = rng.uniform(0, 15);
      const ModelSpec spec = ModelSpec::constrained(v, a, tau, b);
      const std::size_t t = 2 + rng.below(49);
      std::vector<NodeId> parents{1};
      for (std::size_t s = 2; s < t; ++s) parents.push_back(static_cast<NodeId>(1 + rng.below(s)));
      const auto d = brute_degrees(parents, t);
      double sum = 0;
      for (std::size_t k = 1; k <= t; ++k) {
        sum += brute_phi(spec.alpha(), spec.tau(), spec.beta(), d, t, k);
      }
      const double z = normalizer(spec, t);
      REQUIRE(std::abs(z - sum) / z < 1e-10);
      const StepContext ctx{t, d};
      const auto p = step_probabilities(spec, ctx);
      REQUIRE(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1) < 1e-12);
    }
  }

  TEST_CASE("probabilities sum to one for long histories") {
    const ModelSpec spec(Variant::kFull, 0.31, 0.98, std::exp(2.39));
    const std::size_t t = 10000;
    // Star history: degree sum 2(t-1) as the closed form requires.
    std::vector<std::uint32_t> deg(t, 1);
    deg[0] = static_cast<std::uint32_t>(t - 1);
    const auto p = step_probabilities(spec, StepContext{t, deg});
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1) < 1e-12);
  }

  TEST_CASE("monotonicity in alpha and beta") {
    const std::vector<std::uint32_t> deg{2, 2, 1, 1};
    const StepContext ctx{4, deg};
    const ModelSpec lo(Variant::kFull, 0.2, 0.7, 1);
    const ModelSpec hi_a(Variant::kFull, 0.3, 0.7, 1);
    const ModelSpec hi_b(Variant::kFull, 0.2, 0.7, 2);
    for (NodeId k = 1; k <= 4; ++k) CHECK(phi(hi_a, ctx, k) > phi(lo, ctx, k));
    CHECK(step_probabilities(hi_b, ctx)[0] > step_probabilities(lo, ctx)[0]);
  }

  TEST_CASE("underflowed novelty is clamped") {
    const ModelSpec spec(Variant::kNoAlpha, 0, 1e-5, 0.5);
    const std::size_t t = 200;
    std::vector<std::uint32_t> deg(t, 1);
    deg[0] = static_cast<std::uint32_t>(t - 1);
    const StepContext ctx{t, deg};
    CHECK(novelty(1e-5, 150) == 0.0);
    CHECK(phi(spec, ctx, 50) == kPhiFloor);
    const auto p = step_probabilities(spec, ctx);
    for (double x : p) CHECK(x >= 0);
  }
}
