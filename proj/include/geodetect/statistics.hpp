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

#ifndef GEODETECT_STATISTICS_HPP_
#define GEODETECT_STATISTICS_HPP_

#include <string>

#include "geodetect/sampling.hpp"

namespace geodetect {

enum class StatisticName { signed_triangles, trace_cube };

std::string to_string(StatisticName s);

struct TestReport {
  StatisticName statistic_name = StatisticName::signed_triangles;
  double value = 0.0;
  double null_mean = 0.0;
  double null_sd = 0.0;
  double z_score = 0.0;
  double threshold_z = 0.0;
  bool reject = false;
};

// Signed triangles sum_{i<j<k} (G_ij - p)(G_ik - p)(G_jk - p), with p taken
// from the sample's metadata. Evaluated through the centered adjacency
// matrix B (zero diagonal, B_ij = G_ij - p off-diagonal): every closed
// 3-walk with a repeated index passes through a diagonal entry of B and
// vanishes, so tr(B^3) = 6 theta with no residual correction term. The
// matrix product is the production path; tests pin it against direct
// triple enumeration.
double signed_triangles(const GraphSample& g);

// tr(M^3); equals 6 sum_{i<j<k} M_ij M_ik M_jk because the diagonal is zero.
// Matrix form is the production path.
double trace_cube(const SymMatrixSample& m);

// The triangle-sum form of tr(M^3), kept as the algebraic cross-check.
double trace_cube_triangles(const SymMatrixSample& m);

struct NullMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact null moments: signed triangles under G(n,p) have variance
// C(n,3) (p(1-p))^3; trace cube under M(n) has variance 36 C(n,3). Both
// have mean zero. Requires n >= 3.
NullMoments null_moments(StatisticName stat, std::size_t n, double p = 0.0);

// One-sided z test against the exact null moments; rejects for large
// positive values (latent geometry inflates triangle counts).
TestReport run_test(double statistic_value, StatisticName stat, std::size_t n, double p,
                    double false_positive_rate);

TestReport run_test(const GraphSample& g, double false_positive_rate);
TestReport run_test(const SymMatrixSample& m, double false_positive_rate);

}  // namespace geodetect

#endif  // GEODETECT_STATISTICS_HPP_
