// Copyright 2026 geodetect authors.
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
#include <set>
#include <stdexcept>

#include "geodetect/rng.hpp"

using namespace geodetect;

TEST_CASE("counter rng is a pure function of (seed, counter)") {
  const SeedSpec seed{42, 7};
  CounterRng a(seed), b(seed);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // Out-of-order access matches sequential draws.
  CounterRng c(seed);
  CHECK(c.value_at(57) == b.value_at(57));
  CHECK(c.uniform_at(3) == CounterRng(seed).uniform_at(3));
}

TEST_CASE("streams with different ids decorrelate") {
  CounterRng a(SeedSpec{42, 0}), b(SeedSpec{42, 1});
  int agree = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() == b.next_u64()) ++agree;
  }
  CHECK(agree == 0);
  CHECK(substream(SeedSpec{1, 2}, 3).stream_id != substream(SeedSpec{1, 2}, 4).stream_id);
}

TEST_CASE("uniforms stay inside the open interval") {
  CounterRng rng(SeedSpec{9, 9});
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("norm_quantile matches reference values") {
  CHECK(norm_quantile(0.5) == 0.0);
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(norm_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-13));
  CHECK(norm_quantile(0.1) == doctest::Approx(-1.2815515655446004).epsilon(1e-13));
  CHECK(norm_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
  CHECK(norm_quantile(0.25) == -norm_quantile(0.75));
  CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(norm_quantile(1.0), std::domain_error);

  // Round trip with the tail function.
  for (double p : {0.01, 0.1, 0.3, 0.5, 0.77, 0.999}) {
    CHECK(norm_upper_tail(norm_upper_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("gaussian draws have standard moments") {
  CounterRng rng(SeedSpec{2024, 0});
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_gaussian();
    sum += z;
    sum_sq += z * z;
    sum_4 += z * z * z * z;
  }
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sum_4 / n == doctest::Approx(3.0).epsilon(0.02));
}
