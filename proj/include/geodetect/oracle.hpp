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

#ifndef GEODETECT_ORACLE_HPP_
#define GEODETECT_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geodetect/rng.hpp"

namespace geodetect {

struct OracleReport {
  std::string check_name;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;  // absolute; relative checks bake |reference| in
  bool passed = false;
};

OracleReport make_report(std::string name, double computed, double reference, double tolerance);

// Gauss-Hermite rule for integral f(x) e^{-x^2} dx: Newton iteration on the
// orthonormal recurrence, stable at hundreds of nodes.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussHermite(int m);

  // E_{A ~ N(0,1)}[f(A)] via the substitution a = sqrt(2) x.
  double normal_expectation(const std::function<double(double)>& f) const;
};

// Numerical value of E_{A~N(0,1)} exp(-(A - u g)^2/(2(1-u^2))
//                                     -(A - u h)^2/(2(1-u^2)) + A^2)
// by 200-node Gauss-Hermite quadrature. Valid for u in [0, 0.9].
double quadrature_entry_integral(double gi_gj, double hi_hj, double u);

// The closed form the quadrature verifies:
// sqrt((1-u^2)/(1+u^2)) exp(u^2/(1-u^4) g h - u^4/(2(1-u^4))(g^2 + h^2)).
double entry_integral_closed_form(double gi_gj, double hi_hj, double u);

// Exact null moments of the signed-triangle statistic under G(n,p) by
// enumerating all 2^C(n,2) graphs in rational arithmetic, p = num/den.
// Limited to n <= 5.
struct ExactMoments {
  long long mean_num = 0, mean_den = 1;
  long long var_num = 0, var_den = 1;

  double mean() const { return static_cast<double>(mean_num) / static_cast<double>(mean_den); }
  double variance() const { return static_cast<double>(var_num) / static_cast<double>(var_den); }
};

ExactMoments enumerate_signed_triangles_null(int n, long long p_num, long long p_den);

// Closed form C(n,3) (p(1-p))^3 reduced to lowest terms, for exact
// comparison against the enumeration.
ExactMoments signed_triangles_null_formula(int n, long long p_num, long long p_den);

// MC checks of the interaction-statistic moments: E X^2, E Y, E X^3 under
// unconditioned gaussians against n(n-1)/2 and n(n-1)(n-2); E X and E XY
// under the truncated law against 0. X and Y are evaluated by the defining
// double loops, independent of the production identities.
std::vector<OracleReport> mc_moment_suite(std::size_t n, std::int64_t draws, SeedSpec seed);

struct TailCurveRow {
  std::size_t n = 0;
  double a = 0.0;
  double exceed_probability = 0.0;
  std::int64_t draws = 0;
};

std::vector<TailCurveRow> truncation_tail_curve(const std::vector<std::size_t>& n_list,
                                                const std::vector<double>& a_list,
                                                std::int64_t draws, SeedSpec seed);

// Named verification suites: "lemma-inner", "triangles", "moments",
// "tails", or "all".
std::vector<OracleReport> run_oracle_suite(const std::string& suite, SeedSpec seed = {2026, 0});

}  // namespace geodetect

#endif  // GEODETECT_ORACLE_HPP_
