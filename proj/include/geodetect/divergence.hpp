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

#ifndef GEODETECT_DIVERGENCE_HPP_
#define GEODETECT_DIVERGENCE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "geodetect/rng.hpp"
#include "geodetect/sampling.hpp"

namespace geodetect {

// Conditioning set S(a): gaussian vectors with ||g||_2^2 <= (1+a)n and
// ||g||_4^4 <= 3(1+a)n. Makes the chi^2 tails integrable.
struct TruncationSet {
  double a = 1.0;
  std::size_t n = 0;

  TruncationSet(double a_, std::size_t n_);
};

bool in_truncation(std::span<const double> g, const TruncationSet& ts);

// Rejection sampler for N(0, I_n) conditioned on S(a). Throws after 1e6
// consecutive rejections. Vector m of the stream uses gaussian counters
// starting at m*n, so accepted samples are reproducible by index.
std::vector<double> sample_truncated_gaussian(const TruncationSet& ts, CounterRng& rng);
std::vector<double> sample_truncated_gaussian(const TruncationSet& ts, SeedSpec seed);

// log of dM(n,u,g)/dM(n) at A: sum over pairs of
// -log sqrt(1-u^2) - (A_ij - u g_i g_j)^2 / (2(1-u^2)) + A_ij^2 / 2.
// u = 1 is rejected (degenerate density).
double log_density_ratio_spiked(const SymMatrixSample& A, std::span<const double> g, double u);

// Interaction statistics of two spike draws:
// X = sum_{i<j} g_i g_j h_i h_j, Y = (1/2) sum_{i<j} (g_i^2 g_j^2 + h_i^2 h_j^2).
// Production path uses the O(n) algebraic identities; tests pin them
// against the defining double loops.
struct XY {
  double x = 0.0;
  double y = 0.0;
};
XY xy_values(std::span<const double> g, std::span<const double> h);

// Pairwise interaction kernel
//   (1-u^4)^{-n(n-1)/4} exp( u^2/(1-u^4) X - u^4/(1-u^4) Y ),
// the A-expectation of the two density ratios. All arithmetic in log
// space; log_pair_interaction returns the exponent for callers that
// cannot afford the exp.
double log_pair_interaction(std::span<const double> g, std::span<const double> h, double u);
double pair_interaction(std::span<const double> g, std::span<const double> h, double u);

enum class TvMethod { statistic_cdf_gap, chi2_mc };

struct TvEstimate {
  double lower_bound = 0.0;  // for chi2_mc this stores the implied bound (1/2)sqrt(chi2)
  double stderr_value = 0.0;
  TvMethod method = TvMethod::statistic_cdf_gap;
  std::int64_t replicates = 0;
};

struct Chi2Options {
  double a = 0.0;              // 0 -> default max(1, (u^2 n)^{-1/4})
  double max_u2n = 0.1;        // working-regime guard
  bool allow_unguarded = false;
  std::int64_t block = 1 << 14;
};

struct Chi2Result {
  double chi2 = 0.0;
  double chi2_stderr = 0.0;
  double a = 1.0;
  std::int64_t replicates = 0;
  double acceptance_rate = 1.0;  // truncation acceptance of the rejection sampler
  bool unguarded = false;        // u^2 n exceeded the guard
  bool variance_blowup = false;  // relative stderr above 50%

  TvEstimate tv() const;
};

// Truncated Ingster-Suslina chi^2 of the spiked mixture against M(n):
// chi2 = -1 + E_{g,h ~ mu_S(a)}[pair_interaction(g,h,u)], by Monte Carlo
// over independent (g,h) pairs. Parallel over deterministic per-block
// streams; the merged estimate does not depend on thread schedule.
Chi2Result chi2_truncated_mc(std::size_t n, double u, std::int64_t replicates, SeedSpec seed,
                             const Chi2Options& opts = {});

// Largest empirical CDF gap between two statistic samples: a lower bound
// in probability on the TV distance of their generating laws. stderr is
// the 95% DKW band of the two empirical CDFs combined.
TvEstimate tv_lower_bound_cdf_gap(std::span<const double> samples0,
                                  std::span<const double> samples1);

// sup_t |F0(t) - F1(t)| for two samples (the two-sample KS statistic).
double two_sample_sup_gap(std::span<const double> samples0, std::span<const double> samples1);

// Asymptotic two-sample KS p-value for gap D at sample sizes (n0, n1).
double ks_two_sample_p_value(double gap, std::size_t n0, std::size_t n1);

}  // namespace geodetect

#endif  // GEODETECT_DIVERGENCE_HPP_
