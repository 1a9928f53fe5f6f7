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

#include "geodetect/statistics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "geodetect/numeric.hpp"

namespace geodetect {

namespace {

// tr(B^3)/6 for a zero-diagonal symmetric matrix given as a dense buffer.
// Uses tr(B^3) = sum_ij (B^2)_ij B_ij; O(n^3), n stays small in all
// experiments.
double triangle_sum_via_cube(const std::vector<double>& b, std::size_t n) {
  std::vector<double> row_sq(n);
  CompensatedSum trace;
  for (std::size_t i = 0; i < n; ++i) {
    const double* bi = &b[i * n];
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      const double* bj = &b[j * n];
      for (std::size_t k = 0; k < n; ++k) acc += bi[k] * bj[k];
      row_sq[j] = acc;
    }
    for (std::size_t j = 0; j < n; ++j) trace.add(row_sq[j] * bi[j]);
  }
  return trace.value() / 6.0;
}

double binom3(std::size_t n) {
  return static_cast<double>(n) * static_cast<double>(n - 1) * static_cast<double>(n - 2) / 6.0;
}

}  // namespace

std::string to_string(StatisticName s) {
  return s == StatisticName::signed_triangles ? "signed_triangles" : "trace_cube";
}

double signed_triangles(const GraphSample& g) {
  const std::size_t n = g.n();
  const double p = g.p();
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("signed_triangles: sample carries no valid p");
  }
  if (n < 3) return 0.0;
  std::vector<double> b(n * n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = g.edge(i, j) ? 1.0 - p : -p;
      b[i * n + j] = v;
      b[j * n + i] = v;
    }
  }
  return triangle_sum_via_cube(b, n);
}

double trace_cube(const SymMatrixSample& m) {
  const std::size_t n = m.n();
  if (n < 3) return 0.0;
  std::vector<double> b(n * n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = m.entry(i, j);
      b[i * n + j] = v;
      b[j * n + i] = v;
    }
  }
  return 6.0 * triangle_sum_via_cube(b, n);
}

double trace_cube_triangles(const SymMatrixSample& m) {
  const std::size_t n = m.n();
  CompensatedSum acc;
  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 1; j + 1 < n; ++j) {
      const double mij = m.entry(i, j);
      for (std::size_t k = j + 1; k < n; ++k) {
        acc.add(mij * m.entry(i, k) * m.entry(j, k));
      }
    }
  }
  return 6.0 * acc.value();
}

NullMoments null_moments(StatisticName stat, std::size_t n, double p) {
  if (n < 3) throw std::invalid_argument("null_moments: n must be >= 3");
  if (stat == StatisticName::signed_triangles) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("null_moments: p must be in (0,1) for signed triangles");
    }
    const double q = p * (1.0 - p);
    return NullMoments{0.0, binom3(n) * q * q * q};
  }
  return NullMoments{0.0, 36.0 * binom3(n)};
}

TestReport run_test(double statistic_value, StatisticName stat, std::size_t n, double p,
                    double false_positive_rate) {
  if (!(false_positive_rate > 0.0 && false_positive_rate < 0.5)) {
    throw std::invalid_argument("run_test: false_positive_rate must be in (0, 0.5)");
  }
  const NullMoments nm = null_moments(stat, n, p);
  TestReport r;
  r.statistic_name = stat;
  r.value = statistic_value;
  r.null_mean = nm.mean;
  r.null_sd = std::sqrt(nm.variance);
  r.z_score = (statistic_value - nm.mean) / r.null_sd;
  r.threshold_z = norm_upper_quantile(false_positive_rate);
  r.reject = r.z_score > r.threshold_z;
  return r;
}

TestReport run_test(const GraphSample& g, double false_positive_rate) {
  return run_test(signed_triangles(g), StatisticName::signed_triangles, g.n(), g.p(),
                  false_positive_rate);
}

TestReport run_test(const SymMatrixSample& m, double false_positive_rate) {
  return run_test(trace_cube(m), StatisticName::trace_cube, m.n(), 0.0, false_positive_rate);
}

}  // namespace geodetect
