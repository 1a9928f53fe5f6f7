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

#include "geodetect/divergence.hpp"
#include "geodetect/parallel.hpp"
#include "geodetect/sampling.hpp"
#include "test_util.hpp"

using namespace geodetect;

TEST_CASE("erdos-renyi sampler basics") {
  CHECK(sample_er(1, 0.5, SeedSpec{1, 0}).edge_count() == 0);
  CHECK_THROWS_AS(sample_er(10, 0.0, SeedSpec{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(sample_er(10, 1.0, SeedSpec{1, 0}), std::invalid_argument);

  // Fixed seed reproduces the graph bit for bit.
  CHECK(sample_er(40, 0.37, SeedSpec{5, 9}) == sample_er(40, 0.37, SeedSpec{5, 9}));

  // Mean edge count n=100, p=0.5 within 3 standard errors of 2475.
  const int reps = 1000;
  double total = 0.0;
  for (int r = 0; r < reps; ++r) {
    total += static_cast<double>(sample_er(100, 0.5, SeedSpec{6, (std::uint64_t)r}).edge_count());
  }
  const double mean = total / reps;
  const double se = std::sqrt(4950.0 * 0.25 / reps);
  CHECK(std::abs(mean - 2475.0) < 3.0 * se);
}

TEST_CASE("latent sampler: zero-variance coordinates and scale") {
  // Zero weights are inert: their coordinates are exactly zero.
  const Spectrum s(std::vector<double>{1.0, 0.0, 0.0});
  const LatentMatrix x = sample_latent(s, 8, SeedSpec{7, 1});
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(x.at(1, i) == 0.0);
    CHECK(x.at(2, i) == 0.0);
    CHECK(x.at(0, i) != 0.0);
  }

  // alpha = (4): sample variance of the single coordinate within 5% of 4.
  const Spectrum s4(std::vector<double>{4.0});
  const LatentMatrix y = sample_latent(s4, 100000, SeedSpec{7, 2});
  double sum = 0.0, sum_sq = 0.0;
  for (double v : y.values) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(y.values.size());
  const double var = sum_sq / static_cast<double>(y.values.size()) - mean * mean;
  CHECK(var == doctest::Approx(4.0).epsilon(0.05));

  // Determinism.
  const LatentMatrix z1 = sample_latent(s, 5, SeedSpec{8, 3});
  const LatentMatrix z2 = sample_latent(s, 5, SeedSpec{8, 3});
  CHECK(z1.values == z2.values);
}

TEST_CASE("wishart entries: d=1 reduction and variance normalization") {
  // alpha = (1), n = 2: W_12 is the product of the two latent scalars.
  const Spectrum s1(std::vector<double>{1.0});
  const SeedSpec seed{11, 4};
  const SymMatrixSample w = sample_wishart(s1, 2, seed);
  const LatentMatrix x = sample_latent(s1, 2, seed);
  CHECK(w.entry(0, 1) == x.at(0, 0) * x.at(0, 1));

  // Flat alpha, d = 1e4: per-entry sample variance within 5% of 1, and the
  // entry mean vanishes at Monte Carlo scale.
  const Spectrum flat = Spectrum::flat(10000);
  const int reps = 500;
  const std::size_t n = 20;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (int r = 0; r < reps; ++r) {
    const SymMatrixSample m = sample_wishart(flat, n, SeedSpec{12, (std::uint64_t)r});
    for (double v : m.upper_entries()) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(count)));
}

TEST_CASE("gaussian matrix sampler moments and determinism") {
  CHECK(sample_gaussian_matrix(1, SeedSpec{13, 0}).upper_entries().empty());

  const int reps = 1000;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (int r = 0; r < reps; ++r) {
    const SymMatrixSample m = sample_gaussian_matrix(50, SeedSpec{13, (std::uint64_t)r});
    for (double v : m.upper_entries()) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(count)));
  CHECK(sum_sq / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.05));

  const SymMatrixSample a = sample_gaussian_matrix(9, SeedSpec{14, 5});
  const SymMatrixSample b = sample_gaussian_matrix(9, SeedSpec{14, 5});
  CHECK(a.upper_entries() == b.upper_entries());
}

TEST_CASE("rank-one deleted matrix") {
  CHECK(rank_one_deleted({0.0, 0.0, 0.0}).upper_entries() ==
        std::vector<double>{0.0, 0.0, 0.0});
  CHECK(rank_one_deleted({1.0, 1.0, 1.0}).upper_entries() ==
        std::vector<double>{1.0, 1.0, 1.0});
  const SymMatrixSample m = rank_one_deleted({1.0, 2.0, 3.0});
  CHECK(m.entry(0, 1) == 2.0);
  CHECK(m.entry(0, 2) == 3.0);
  CHECK(m.entry(1, 2) == 6.0);
  CHECK(m.entry(2, 1) == 6.0);
  CHECK(m.entry(1, 1) == 0.0);
}

TEST_CASE("spiked sampler endpoints") {
  const SeedSpec seed{15, 6};
  // u = 0 reproduces the gaussian matrix bit for bit under the same seed.
  CHECK(sample_spiked(12, 0.0, seed).upper_entries() ==
        sample_gaussian_matrix(12, seed).upper_entries());

  // u = 1 equals Delta(g) exactly for the spike drawn after the noise block.
  const std::size_t n = 10;
  const SymMatrixSample m1 = sample_spiked(n, 1.0, seed);
  CounterRng rng(seed);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = rng.gaussian_at(pair_count(n) + i);
  const SymMatrixSample delta = rank_one_deleted(g);
  for (std::size_t k = 0; k < pair_count(n); ++k) {
    CHECK(m1.upper(k) == 1.0 * delta.upper(k));
  }

  CHECK_THROWS_AS(sample_spiked(5, 1.5, seed), std::invalid_argument);
  CHECK_THROWS_AS(sample_spiked(5, -0.1, seed), std::invalid_argument);
}

TEST_CASE("spiked entries at u=0.3 have mean 0 and unit variance") {
  const std::size_t n = 20;
  const int reps = 10000;
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (int r = 0; r < reps; ++r) {
    const SymMatrixSample m = sample_spiked(n, 0.3, SeedSpec{16, (std::uint64_t)r});
    for (double v : m.upper_entries()) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(count)));
  // Var(g_i g_j) = 1 for independent standard normals, so u^2 + (1-u^2) = 1.
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("threshold kernel edge cases and gaussian calibration") {
  const SymMatrixSample m = sample_gaussian_matrix(30, SeedSpec{17, 0});
  CHECK(threshold_graph(m, 1e308, 0.5).edge_count() == 0);
  CHECK(threshold_graph(m, -1e308, 0.5).edge_count() == pair_count(30));

  // Thresholding M(n) at the normal upper quantile gives edge density p.
  const double p = 0.3;
  const double t = norm_upper_quantile(p);
  const int reps = 200;
  double edges = 0.0;
  for (int r = 0; r < reps; ++r) {
    edges += static_cast<double>(
        threshold_graph(sample_gaussian_matrix(50, SeedSpec{18, (std::uint64_t)r}), t, p)
            .edge_count());
  }
  const double pairs = static_cast<double>(pair_count(50));
  const double density = edges / (reps * pairs);
  const double se = std::sqrt(p * (1.0 - p) / (reps * pairs));
  CHECK(std::abs(density - p) < 3.0 * se);
}

TEST_CASE("coupling identity: thresholded wishart equals the direct geometric graph") {
  CounterRng rng(SeedSpec{19, 0});
  for (int rep = 0; rep < 20; ++rep) {
    const Spectrum s = testutil::random_spectrum(rng, 80);
    const std::size_t n = 2 + rng.next_u64() % 20;
    const double p = 0.1 + 0.8 * rng.next_uniform();
    const double t = 0.5 * s.l2() * (rng.next_uniform() - 0.5);
    const SeedSpec seed{20, rng.next_u64()};
    const GraphSample direct = sample_rgg(s, n, p, t, seed);
    const GraphSample coupled = threshold_graph(sample_wishart(s, n, seed), t / s.l2(), p);
    CHECK(direct == coupled);
  }
}

TEST_CASE("blocked gram matches naive column dot products") {
  CounterRng rng(SeedSpec{21, 0});
  for (std::size_t d : {1u, 3u, 4096u, 5000u, 9000u}) {
    std::vector<double> w(d);
    for (auto& v : w) v = rng.next_uniform();
    const Spectrum s(std::move(w));
    const std::size_t n = 6;
    const SeedSpec seed{22, d};
    const std::vector<double> gram = latent_gram_upper(s, n, seed);
    const LatentMatrix x = sample_latent(s, n, seed);
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        long double dot = 0.0L;
        for (std::size_t m = 0; m < d; ++m) {
          dot += static_cast<long double>(x.at(m, i)) * x.at(m, j);
        }
        CHECK(gram[k] == doctest::Approx(static_cast<double>(dot)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rgg edge density at the symmetric point") {
  // alpha = 1^d, p = 0.5, t = 0: the inner-product law is symmetric, so the
  // empirical density sits at 1/2.
  const Spectrum s = Spectrum::flat(64);
  const int reps = 300;
  double edges = 0.0;
  for (int r = 0; r < reps; ++r) {
    edges +=
        static_cast<double>(sample_rgg(s, 12, 0.5, 0.0, SeedSpec{23, (std::uint64_t)r}).edge_count());
  }
  const double pairs = static_cast<double>(pair_count(12));
  const double se = std::sqrt(0.25 / (reps * pairs));
  CHECK(std::abs(edges / (reps * pairs) - 0.5) < 3.0 * se);

  // Very negative threshold gives the complete graph.
  CHECK(sample_rgg(s, 10, 0.5, -1e308, SeedSpec{23, 999}).edge_count() == pair_count(10));
}

TEST_CASE("spiked sampler at u=0 matches the gaussian ensemble in distribution") {
  // Two-sample KS on pooled entries from independent seeds.
  const std::size_t n = 5;
  const int reps = 10000;
  std::vector<double> a, b;
  a.reserve(reps * pair_count(n));
  b.reserve(reps * pair_count(n));
  for (int r = 0; r < reps; ++r) {
    for (double v : sample_spiked(n, 0.0, SeedSpec{24, (std::uint64_t)r}).upper_entries()) {
      a.push_back(v);
    }
    for (double v : sample_gaussian_matrix(n, SeedSpec{25, (std::uint64_t)r}).upper_entries()) {
      b.push_back(v);
    }
  }
  const double gap = two_sample_sup_gap(a, b);
  CHECK(ks_two_sample_p_value(gap, a.size(), b.size()) > 0.01);
}

TEST_CASE("wishart entry law approaches the standard normal [slow]") {
  // Fixed-entry CLT at d = 1e6: a fixed entry of W(n, 1^d) depends only on
  // its two latent columns, so n = 2 samples the same marginal law through
  // the production path at 2/n the cost.
  const Spectrum s = Spectrum::flat(1000000);
  const int reps = 100000;
  std::vector<double> entries(reps);
  parallel_for(reps, [&](std::size_t r) {
    entries[r] = sample_wishart(s, 2, SeedSpec{26, r}).upper(0);
  });
  const double ks = testutil::ks_distance_normal(entries);
  MESSAGE("wishart entry KS distance vs N(0,1): ", ks);
  CHECK(ks < 0.01);
}
