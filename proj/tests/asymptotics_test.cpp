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

#include "threadtree/asymptotics.hpp"

using namespace threadtree;

TEST_SUITE("asymptotics") {
  TEST_CASE("bounds start at one and stay ordered") {
    const DegreeBounds b = degree_bound_sequences(0.31, 0.98, std::exp(2.39), 10, 5000);
    CHECK(b.lower_at(10) == 1);
    CHECK(b.upper_at(10) == 1);
    for (std::size_t t = 10; t <= 5000; ++t) REQUIRE(b.lower_at(t) <= b.upper_at(t));
    CHECK(b.log_correction <= correction_bound_log(0.98));
  }

  TEST_CASE("lower bound equals its gamma-function closed form") {
    const double a = 0.4, tau = 0.7, beta = 3;
    const std::size_t k = 7;
    const DegreeBounds b = degree_bound_sequences(a, tau, beta, k, 100000);
    const double g = tau / (1 - tau);
    const double A = (beta - a + g) / (2 * a), B = (beta - 2 * a + g) / (2 * a);
    for (std::size_t t : {7u, 8u, 50u, 1000u, 100000u}) {
      const double td = static_cast<double>(t), kd = static_cast<double>(k);
      const double closed = std::exp(std::lgamma(td + A) + std::lgamma(kd + B) -
                                     std::lgamma(kd + A) - std::lgamma(td + B));
      CHECK(b.lower_at(t) == doctest::Approx(closed).epsilon(1e-8));
    }
  }

  TEST_CASE("correction constant bound") {
    CHECK(std::exp(correction_bound_log(0.9)) == doctest::Approx(8.1e3).epsilon(0.01));
    CHECK(std::exp(correction_bound_log(0.99)) == doctest::Approx(9.89e42).epsilon(0.01));
    double prev = 0;
    for (double tau : {0.5, 0.7, 0.9, 0.95, 0.99}) {
      const DegreeBounds b = degree_bound_sequences(0.5, tau, 2, 2, 20000);
      CHECK(b.log_correction > prev);
      CHECK(b.log_correction <= correction_bound_log(tau));
      prev = b.log_correction;
    }
  }

  TEST_CASE("square-root ratio stabilizes") {
    const DegreeBounds b = degree_bound_sequences(0.31, 0.98, std::exp(2.39), 10, 1000000);
    const double last = b.ratio_at(1000000), decade = b.ratio_at(100000);
    CHECK(std::abs(last - decade) / last < 1e-3);
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS(degree_bound_sequences(0, 0.5, 1, 2, 10));
    CHECK_THROWS(degree_bound_sequences(0.5, 1, 1, 2, 10));
    CHECK_THROWS(degree_bound_sequences(0.5, 0.5, 1, 1, 10));
    CHECK_THROWS(degree_bound_sequences(0.5, 0.5, 1, 20, 10));
  }

  TEST_CASE("geometric time grid") {
    const auto t = geometric_times(10, 1000, 10);
    CHECK(t.front() == 10);
    CHECK(t.back() == 1000);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  }

  TEST_CASE("uniform model follows the harmonic sum") {
    const std::size_t k = 5, t_max = 400;
    const auto curve = monte_carlo_degree_mean(ModelSpec::uniform(), k, t_max, 4000, 3);
    for (const auto& p : curve) {
      double expected = 1;
      for (std::size_t s = k; s < p.t; ++s) expected += 1.0 / static_cast<double>(s);
      const double half = (p.ci_high - p.ci_low) / 2;
      CHECK(std::abs(p.mean - expected) <= 2 * half + 1e-12);
    }
  }

  TEST_CASE("doubling k divides the mean degree by about root two") {
    const ModelSpec spec(Variant::kFull, 1, 0.5, 1);
    const std::size_t t = 20000;
    const double m1 = monte_carlo_degree_mean(spec, 100, t, 2000, 4).back().mean;
    const double m2 = monte_carlo_degree_mean(spec, 200, t, 2000, 5).back().mean;
    CHECK(std::abs(m1 / m2 - std::sqrt(2.0)) / std::sqrt(2.0) < 0.1);
  }

  TEST_CASE("tail exponent of an exact power law") {
    std::vector<std::pair<std::size_t, double>> c;
    for (std::size_t x = 1; x <= 200; ++x) c.emplace_back(x, std::pow(double(x), -2.0));
    const TailFit f = tail_exponent(c, 5);
    CHECK(std::abs(f.slope + 2) < 1e-6);
    CHECK(f.points == 196);
    CHECK_THROWS(tail_exponent(c, 195));
  }
}
