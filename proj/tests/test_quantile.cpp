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
#include <stdexcept>
#include <vector>

#include "geodetect/quantile.hpp"
#include "geodetect/rng.hpp"
#include "test_util.hpp"

using namespace geodetect;

TEST_CASE("mc threshold at p = 1/2 sits at zero") {
  // The law of sum alpha_i Z_i Z'_i is symmetric about 0 for every alpha.
  const Spectrum s = Spectrum::power_law(30, 0.4);
  const QuantileResult r = solve_threshold_mc(s, 0.5, 100000, SeedSpec{41, 0});
  CHECK(std::abs(r.t) <= 3.0 * r.stderr_or_quadrature_bound);
  CHECK(std::abs(r.achieved_p - 0.5) <= 3.0 * std::sqrt(0.25 / 100000.0));
  CHECK(r.method == QuantileResult::Method::monte_carlo);
}

TEST_CASE("mc threshold input validation") {
  const Spectrum s = Spectrum::flat(4);
  CHECK_THROWS_AS(solve_threshold_mc(s, 0.0, 10000, SeedSpec{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(solve_threshold_mc(s, 1.0, 10000, SeedSpec{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(solve_threshold_mc(s, 0.5, 999, SeedSpec{1, 0}), std::invalid_argument);
}

TEST_CASE("cf inversion on the product normal") {
  const Spectrum s(std::vector<double>{1.0});

  // p = 1/2: symmetry pins t to 0 within tol.
  const QuantileResult half = solve_threshold_cf(s, 0.5, 1e-6);
  CHECK(std::abs(half.t) <= 1e-6);
  CHECK(std::abs(half.achieved_p - 0.5) <= 1e-6);

  // Tail at t = 0.5 against a 1e7-sample Monte Carlo oracle.
  const double tail = inner_product_upper_tail_cf(s, 0.5, 1e-7);
  CounterRng rng(SeedSpec{42, 0});
  const int reps = 10000000;
  long hits = 0;
  for (int r = 0; r < reps; ++r) {
    if (rng.next_gaussian() * rng.next_gaussian() >= 0.5) ++hits;
  }
  const double mc = static_cast<double>(hits) / reps;
  const double se = std::sqrt(mc * (1.0 - mc) / reps);
  CHECK(std::abs(tail - mc) <= 3.0 * se);
}

TEST_CASE("cf inversion reaches deep tails at d = 1") {
  // Shallow polynomial decay of the integrand: the truncation point sits
  // ~1e4 half-periods out here. Reference band from a 2e6-draw MC oracle.
  const Spectrum s(std::vector<double>{1.0});
  const double tail = inner_product_upper_tail_cf(s, 2.0, 1e-7);
  CHECK(tail > 0.0302);
  CHECK(tail < 0.0313);
}

TEST_CASE("cf inversion is permutation invariant") {
  const QuantileResult a = solve_threshold_cf(Spectrum(std::vector<double>{3.0, 4.0}), 0.2, 1e-6);
  const QuantileResult b = solve_threshold_cf(Spectrum(std::vector<double>{4.0, 3.0}), 0.2, 1e-6);
  CHECK(a.t == doctest::Approx(b.t).epsilon(1e-9));
}

TEST_CASE("threshold scales linearly with the spectrum") {
  const std::vector<double> base{2.0, 1.0, 0.5, 0.25};
  const double c = 3.5;
  std::vector<double> scaled = base;
  for (double& w : scaled) w *= c;

  const SeedSpec seed{43, 0};
  const QuantileResult t1 = solve_threshold_mc(Spectrum(base), 0.2, 100000, seed);
  const QuantileResult tc = solve_threshold_mc(Spectrum(scaled), 0.2, 100000, seed);
  CHECK(tc.t == doctest::Approx(c * t1.t).epsilon(1e-9));

  const QuantileResult f1 = solve_threshold_cf(Spectrum(base), 0.2, 1e-5);
  const QuantileResult fc = solve_threshold_cf(Spectrum(scaled), 0.2, 1e-5);
  // Tolerance-aware: map the p-tolerance through the local density.
  CHECK(fc.t == doctest::Approx(c * f1.t).epsilon(1e-3));
}

TEST_CASE("threshold is strictly decreasing in p and antisymmetric") {
  const Spectrum s = Spectrum::flat(100);
  const SeedSpec seed{44, 0};
  double prev = 1e300;
  for (double p : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const QuantileResult r = solve_threshold_mc(s, p, 200000, seed);
    CHECK(r.t < prev);
    prev = r.t;
  }
  const QuantileResult lo = solve_threshold_mc(s, 0.2, 200000, seed);
  const QuantileResult hi = solve_threshold_mc(s, 0.8, 200000, seed);
  CHECK(std::abs(lo.t + hi.t) <=
        3.0 * (lo.stderr_or_quadrature_bound + hi.stderr_or_quadrature_bound));

  const QuantileResult flo = solve_threshold_cf(Spectrum(std::vector<double>{1.0, 0.7}), 0.25, 1e-6);
  const QuantileResult fhi = solve_threshold_cf(Spectrum(std::vector<double>{1.0, 0.7}), 0.75, 1e-6);
  CHECK(std::abs(flo.t + fhi.t) < 1e-3);
}

TEST_CASE("monte carlo and cf inversion agree on a random corpus") {
  CounterRng rng(SeedSpec{45, 0});
  for (int rep = 0; rep < 20; ++rep) {
    const Spectrum s = testutil::random_spectrum(rng, 100);
    const double p = 0.1 + 0.35 * rng.next_uniform();
    const double tol = 1e-4;
    const QuantileResult mc = solve_threshold_mc(s, p, 200000, SeedSpec{46, rng.next_u64()});
    const QuantileResult cf = solve_threshold_cf(s, p, tol);
    // Map the cf p-tolerance into t units through the density implied by
    // the mc stderr (stderr_t = stderr_p / f).
    const double stderr_p = std::sqrt(p * (1.0 - p) / 200000.0);
    const double tol_t = tol * mc.stderr_or_quadrature_bound / stderr_p;
    CHECK(std::abs(mc.t - cf.t) <= 3.0 * (mc.stderr_or_quadrature_bound + tol_t));
    // Result invariant: achieved probabilities honor the declared bounds.
    CHECK(std::abs(mc.achieved_p - p) <= 3.0 * std::sqrt(p * (1.0 - p) / 200000.0));
    CHECK(std::abs(cf.achieved_p - p) <= tol);
  }
}

TEST_CASE("cf inversion rejects oversized spectra") {
  CHECK_THROWS_AS(solve_threshold_cf(Spectrum::flat(11), 0.3, 1e-5, /*max_dim=*/10),
                  std::invalid_argument);
}

TEST_CASE("mc threshold approaches the gaussian quantile at large d [slow]") {
  // CLT limit of the standardized inner product: t / ||alpha||_2 within
  // 0.02 of the normal upper quantile at p = 0.1.
  const Spectrum s = Spectrum::flat(10000);
  const QuantileResult r = solve_threshold_mc(s, 0.1, 100000, SeedSpec{47, 0});
  CHECK(r.t / s.l2() == doctest::Approx(1.2815515655446004).epsilon(0.0161));
}
