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

#include "geodetect/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geodetect/numeric.hpp"
#include "geodetect/parallel.hpp"

namespace geodetect {

TruncationSet::TruncationSet(double a_, std::size_t n_) : a(a_), n(n_) {
  if (!(a >= 1.0)) throw std::invalid_argument("TruncationSet: a must be >= 1");
  if (n < 1) throw std::invalid_argument("TruncationSet: n must be >= 1");
}

bool in_truncation(std::span<const double> g, const TruncationSet& ts) {
  if (g.size() != ts.n) throw std::invalid_argument("in_truncation: length mismatch");
  const double cap = (1.0 + ts.a) * static_cast<double>(ts.n);
  CompensatedSum l2, l4;
  for (double v : g) {
    const double v2 = v * v;
    l2.add(v2);
    l4.add(v2 * v2);
  }
  return l2.value() <= cap && l4.value() <= 3.0 * cap;
}

std::vector<double> sample_truncated_gaussian(const TruncationSet& ts, CounterRng& rng) {
  constexpr int kMaxRejections = 1000000;
  std::vector<double> g(ts.n);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (std::size_t i = 0; i < ts.n; ++i) g[i] = rng.next_gaussian();
    if (in_truncation(g, ts)) return g;
  }
  throw std::runtime_error("sample_truncated_gaussian: acceptance failure after 1e6 rejections");
}

std::vector<double> sample_truncated_gaussian(const TruncationSet& ts, SeedSpec seed) {
  CounterRng rng(seed);
  return sample_truncated_gaussian(ts, rng);
}

double log_density_ratio_spiked(const SymMatrixSample& A, std::span<const double> g, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("log_density_ratio_spiked: u must be in [0,1)");
  }
  if (g.size() != A.n()) {
    throw std::invalid_argument("log_density_ratio_spiked: spike length mismatch");
  }
  const double v = 1.0 - u * u;
  const double log_norm = -0.5 * std::log1p(-u * u);
  CompensatedSum acc;
  const std::size_t n = A.n();
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const double a = A.upper(k);
      const double shifted = a - u * g[i] * g[j];
      acc.add(log_norm - shifted * shifted / (2.0 * v) + 0.5 * a * a);
    }
  }
  return acc.value();
}

XY xy_values(std::span<const double> g, std::span<const double> h) {
  if (g.size() != h.size()) throw std::invalid_argument("xy_values: length mismatch");
  // X = (1/2)(<g,h>^2 - sum g_i^2 h_i^2);
  // Y = (1/4)(||g||_2^4 - ||g||_4^4 + ||h||_2^4 - ||h||_4^4).
  CompensatedSum dot, gh_sq, g2, g4, h2, h4;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gi2 = g[i] * g[i];
    const double hi2 = h[i] * h[i];
    dot.add(g[i] * h[i]);
    gh_sq.add(gi2 * hi2);
    g2.add(gi2);
    g4.add(gi2 * gi2);
    h2.add(hi2);
    h4.add(hi2 * hi2);
  }
  const double dv = dot.value();
  XY out;
  out.x = 0.5 * (dv * dv - gh_sq.value());
  const double g2v = g2.value();
  const double h2v = h2.value();
  out.y = 0.25 * (g2v * g2v - g4.value() + h2v * h2v - h4.value());
  return out;
}

double log_pair_interaction(std::span<const double> g, std::span<const double> h, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("pair_interaction: u must be in [0,1)");
  }
  const std::size_t n = g.size();
  const double u2 = u * u;
  const double u4 = u2 * u2;
  const double one_minus_u4 = 1.0 - u4;
  const XY xy = xy_values(g, h);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  return -(pairs / 4.0) * std::log1p(-u4) + (u2 / one_minus_u4) * xy.x -
         (u4 / one_minus_u4) * xy.y;
}

double pair_interaction(std::span<const double> g, std::span<const double> h, double u) {
  return std::exp(log_pair_interaction(g, h, u));
}

TvEstimate Chi2Result::tv() const {
  TvEstimate e;
  e.method = TvMethod::chi2_mc;
  e.replicates = replicates;
  const double c = std::max(chi2, 0.0);
  e.lower_bound = std::min(0.5 * std::sqrt(c), 1.0);
  // Delta method; flat at chi2 = 0 where the map is not differentiable.
  e.stderr_value = c > 0.0 ? 0.25 * chi2_stderr / std::sqrt(c) : 0.5 * std::sqrt(chi2_stderr);
  return e;
}

Chi2Result chi2_truncated_mc(std::size_t n, double u, std::int64_t replicates, SeedSpec seed,
                             const Chi2Options& opts) {
  if (n < 2) throw std::invalid_argument("chi2_truncated_mc: n must be >= 2");
  if (!(u >= 0.0 && u < 1.0)) {
    throw std::invalid_argument("chi2_truncated_mc: u must be in [0,1)");
  }
  if (replicates < 1) throw std::invalid_argument("chi2_truncated_mc: replicates must be >= 1");

  const double u2n = u * u * static_cast<double>(n);
  const bool unguarded = u2n > opts.max_u2n;
  if (unguarded && !opts.allow_unguarded) {
    throw std::invalid_argument(
        "chi2_truncated_mc: u^2 n exceeds the working-regime guard; pass allow_unguarded to "
        "run anyway");
  }

  double a = opts.a;
  if (a <= 0.0) a = u2n > 0.0 ? std::max(1.0, std::pow(u2n, -0.25)) : 1.0;
  const TruncationSet ts(a, n);

  const std::int64_t block = std::max<std::int64_t>(1, opts.block);
  const std::int64_t n_blocks = (replicates + block - 1) / block;

  std::vector<double> block_sum(static_cast<std::size_t>(n_blocks));
  std::vector<double> block_sum_sq(static_cast<std::size_t>(n_blocks));
  std::vector<std::int64_t> block_attempts(static_cast<std::size_t>(n_blocks));

  parallel_for(static_cast<std::size_t>(n_blocks), [&](std::size_t b) {
    CounterRng rng(substream(seed, 0x63686932ULL + b));
    const std::int64_t lo = static_cast<std::int64_t>(b) * block;
    const std::int64_t hi = std::min<std::int64_t>(replicates, lo + block);
    CompensatedSum sum, sum_sq;
    std::int64_t attempts = 0;
    std::vector<double> g, h;
    for (std::int64_t m = lo; m < hi; ++m) {
      const std::uint64_t before = rng.counter();
      g = sample_truncated_gaussian(ts, rng);
      h = sample_truncated_gaussian(ts, rng);
      attempts += static_cast<std::int64_t>((rng.counter() - before) / n);
      // expm1 keeps precision when chi2 is far below the per-draw spread.
      const double centered = std::expm1(log_pair_interaction(g, h, u));
      sum.add(centered);
      sum_sq.add(centered * centered);
    }
    block_sum[b] = sum.value();
    block_sum_sq[b] = sum_sq.value();
    block_attempts[b] = attempts;
  });

  CompensatedSum total, total_sq;
  std::int64_t attempts = 0;
  for (std::size_t b = 0; b < static_cast<std::size_t>(n_blocks); ++b) {
    total.add(block_sum[b]);
    total_sq.add(block_sum_sq[b]);
    attempts += block_attempts[b];
  }

  const double r = static_cast<double>(replicates);
  const double mean = total.value() / r;
  const double var = std::max(0.0, total_sq.value() / r - mean * mean);

  Chi2Result out;
  out.chi2 = mean;
  out.chi2_stderr = std::sqrt(var / r);
  out.a = a;
  out.replicates = replicates;
  out.acceptance_rate =
      attempts > 0 ? 2.0 * r / static_cast<double>(attempts) : 1.0;
  out.unguarded = unguarded;
  out.variance_blowup = std::abs(mean) > 0.0 && out.chi2_stderr > 0.5 * std::abs(mean);
  return out;
}

double two_sample_sup_gap(std::span<const double> samples0, std::span<const double> samples1) {
  if (samples0.empty() || samples1.empty()) {
    throw std::invalid_argument("two_sample_sup_gap: empty sample set");
  }
  std::vector<double> a(samples0.begin(), samples0.end());
  std::vector<double> b(samples1.begin(), samples1.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double gap = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double v = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= v) ++ia;
    while (ib < b.size() && b[ib] <= v) ++ib;
    gap = std::max(gap, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  return gap;
}

double ks_two_sample_p_value(double gap, std::size_t n0, std::size_t n1) {
  const double ne = static_cast<double>(n0) * static_cast<double>(n1) /
                    static_cast<double>(n0 + n1);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * gap;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TvEstimate tv_lower_bound_cdf_gap(std::span<const double> samples0,
                                  std::span<const double> samples1) {
  const double gap = two_sample_sup_gap(samples0, samples1);
  // 95% DKW band per empirical CDF: eps_i = sqrt(log(2/0.05) / (2 n_i)).
  const double delta = 0.05;
  const double eps0 = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples0.size())));
  const double eps1 = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples1.size())));
  TvEstimate e;
  e.lower_bound = gap;
  e.stderr_value = eps0 + eps1;
  e.method = TvMethod::statistic_cdf_gap;
  e.replicates = static_cast<std::int64_t>(samples0.size() + samples1.size());
  return e;
}

}  // namespace geodetect
