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

#include "threadtree/special.hpp"

using namespace threadtree;

// Reference values from an independent statistics library.
TEST_SUITE("special") {
  TEST_CASE("chi-squared and F upper tails") {
    CHECK(chi_squared_sf(3.84, 1) == doctest::Approx(0.05004352124870519).epsilon(1e-10));
    CHECK(chi_squared_sf(10, 1) == doctest::Approx(0.001565402258002549).epsilon(1e-10));
    CHECK(chi_squared_sf(7.5, 3) == doctest::Approx(0.0575584519726364).epsilon(1e-10));
    CHECK(chi_squared_sf(0, 1) == 1);
    CHECK(f_sf(2.5, 3, 396) == doctest::Approx(0.05914093950349419).epsilon(1e-10));
    CHECK(f_sf(1.0, 2, 9) == doctest::Approx(0.4053444297059028).epsilon(1e-10));
  }

  TEST_CASE("studentized range cdf") {
    CHECK(std::abs(studentized_range_cdf(3.5, 4, 20) - 0.9050415494536981) < 1e-6);
    CHECK(std::abs(studentized_range_cdf(2.0, 3, 10) - 0.6294553249645047) < 1e-6);
    CHECK(std::abs(studentized_range_cdf(5.0, 6, 30) - 0.9846148918097078) < 1e-6);
    CHECK(studentized_range_cdf(0, 3, 10) == 0);
    // Two normals: the range is |Z1 - Z2| ~ sqrt(2) |N(0,1)|.
    const double w = 1.3;
    CHECK(std::abs(normal_range_cdf(w, 2) - std::erf(w / 2)) < 1e-10);
  }

  TEST_CASE("studentized range quantile") {
    CHECK(std::abs(studentized_range_quantile(0.95, 3, 10) - 3.876776750013158) < 1e-6);
    CHECK(std::abs(studentized_range_quantile(0.95, 4, 20) - 3.9582935609453846) < 1e-6);
    CHECK(std::abs(studentized_range_quantile(0.95, 4, 396) - 3.648632328408451) < 1e-6);
    CHECK(std::abs(studentized_range_quantile(0.95, 2, 5) - 3.63535169514679) < 1e-6);
    CHECK(std::abs(studentized_range_quantile(0.95, 10, 60) - 4.646323963266348) < 1e-6);
    CHECK(std::abs(studentized_range_quantile(0.95, 3, 12) - 3.772928965726967) < 1e-6);
    CHECK_THROWS(studentized_range_quantile(1.0, 3, 10));
  }
}
