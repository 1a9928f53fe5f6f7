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

#ifndef GEODETECT_QUANTILE_HPP_
#define GEODETECT_QUANTILE_HPP_

#include <cstdint>

#include "geodetect/rng.hpp"
#include "geodetect/spectrum.hpp"

namespace geodetect {

// Solves P(<X_1, X_2> >= t) = p for the edge threshold, where the inner
// product has the law sum_i alpha_i Z_i Z'_i over independent standard
// normals.
struct QuantileResult {
  double t = 0.0;
  double achieved_p = 0.0;
  enum class Method { monte_carlo, cf_inversion } method = Method::monte_carlo;
  // Quantile stderr for monte_carlo; combined root/quadrature bound for
  // cf_inversion.
  double stderr_or_quadrature_bound = 0.0;
  std::int64_t samples_or_nodes = 0;
};

// Empirical (1-p)-quantile of n_samples draws. The order statistic is
// taken at index ceil((1-p) n); stderr comes from sqrt(p(1-p)/n) divided
// by a central finite-difference density over the +-0.5%-quantile window.
QuantileResult solve_threshold_mc(const Spectrum& s, double p, std::int64_t n_samples,
                                  SeedSpec seed);

// Gil-Pelaez inversion of the characteristic function
// phi(s) = prod_i (1 + alpha_i^2 s^2)^{-1/2}, followed by bisection on t
// until |achieved_p - p| <= tol.
QuantileResult solve_threshold_cf(const Spectrum& s, double p, double tol,
                                  std::size_t max_dim = 100000);

// Tail probability P(sum alpha_i Z_i Z'_i >= t) by the same inversion;
// exposed for direct validation. Accumulates integrand evaluations into
// *node_count when given.
double inner_product_upper_tail_cf(const Spectrum& s, double t, double tol,
                                   std::int64_t* node_count = nullptr);

}  // namespace geodetect

#endif  // GEODETECT_QUANTILE_HPP_
