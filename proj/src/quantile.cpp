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

#include "geodetect/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodetect/numeric.hpp"
#include "geodetect/parallel.hpp"

namespace geodetect {

namespace {

constexpr std::int64_t kMcBlock = 8192;

// 15-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGl15X[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGl15W[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

// 7-point Gauss-Legendre, used as the embedded error estimate.
constexpr double kGl7X[7] = {-0.9491079123427585, -0.7415311855993945,
                             -0.4058451513773972, 0.0,
                             0.4058451513773972,  0.7415311855993945,
                             0.9491079123427585};
constexpr double kGl7W[7] = {0.1294849661688697, 0.2797053914892767,
                             0.3818300505051189, 0.4179591836734694,
                             0.3818300505051189, 0.2797053914892767,
                             0.1294849661688697};

struct CfIntegrand {
  const std::vector<double>& alpha_sq;
  double t;
  mutable std::int64_t evals = 0;

  double phi(double s) const {
    const double s2 = s * s;
    double log_phi = 0.0;
    for (double a2 : alpha_sq) {
      if (a2 != 0.0) log_phi += std::log1p(a2 * s2);
    }
    return std::exp(-0.5 * log_phi);
  }

  // sin(st)/s * phi(s); finite at s = 0.
  double operator()(double s) const {
    ++evals;
    if (s * t < 1e-8) return t * phi(s) * (1.0 - (s * t) * (s * t) / 6.0);
    return std::sin(s * t) / s * phi(s);
  }
};

double gl_panel(const CfIntegrand& f, double a, double b, const double* xs, const double* ws,
                int m) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += ws[i] * f(c + h * xs[i]);
  return acc * h;
}

double adaptive_panel(const CfIntegrand& f, double a, double b, double budget, int depth) {
  const double coarse = gl_panel(f, a, b, kGl7X, kGl7W, 7);
  const double fine = gl_panel(f, a, b, kGl15X, kGl15W, 15);
  if (std::abs(fine - coarse) <= budget || depth >= 24) return fine;
  const double mid = 0.5 * (a + b);
  return adaptive_panel(f, a, mid, budget * 0.5, depth + 1) +
         adaptive_panel(f, mid, b, budget * 0.5, depth + 1);
}

}  // namespace

QuantileResult solve_threshold_mc(const Spectrum& s, double p, std::int64_t n_samples,
                                  SeedSpec seed) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("solve_threshold_mc: p must be in (0,1)");
  }
  if (n_samples < 1000) {
    throw std::invalid_argument("solve_threshold_mc: n_samples must be >= 1000");
  }
  const std::size_t d = s.dim();
  const auto w = s.weights();
  const std::int64_t n_blocks = (n_samples + kMcBlock - 1) / kMcBlock;

  std::vector<double> draws(static_cast<std::size_t>(n_samples));
  parallel_for(static_cast<std::size_t>(n_blocks), [&](std::size_t b) {
    const CounterRng rng(substream(seed, b));
    const std::int64_t lo = static_cast<std::int64_t>(b) * kMcBlock;
    const std::int64_t hi = std::min(n_samples, lo + kMcBlock);
    for (std::int64_t m = lo; m < hi; ++m) {
      const std::uint64_t base = static_cast<std::uint64_t>(m - lo) * 2 * d;
      CompensatedSum acc;
      for (std::size_t i = 0; i < d; ++i) {
        const double z = rng.gaussian_at(base + 2 * i);
        const double zp = rng.gaussian_at(base + 2 * i + 1);
        acc.add(w[i] * z * zp);
      }
      draws[static_cast<std::size_t>(m)] = acc.value();
    }
  });

  std::vector<double> sorted = draws;
  std::sort(sorted.begin(), sorted.end());

  const auto order_stat = [&](double level) {
    // 1-based index ceil(level * n), clamped.
    std::int64_t k = static_cast<std::int64_t>(std::ceil(level * static_cast<double>(n_samples)));
    k = std::clamp<std::int64_t>(k, 1, n_samples);
    return sorted[static_cast<std::size_t>(k - 1)];
  };

  const double t = order_stat(1.0 - p);
  const double v_lo = order_stat(1.0 - p - 0.005);
  const double v_hi = order_stat(1.0 - p + 0.005);
  const double width = std::max(v_hi - v_lo, 1e-300);
  const double density = 0.01 / width;
  const double stderr_p = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));

  std::int64_t at_least = 0;
  for (double v : draws) {
    if (v >= t) ++at_least;
  }

  QuantileResult out;
  out.t = t;
  out.achieved_p = static_cast<double>(at_least) / static_cast<double>(n_samples);
  out.method = QuantileResult::Method::monte_carlo;
  out.stderr_or_quadrature_bound = stderr_p / density;
  out.samples_or_nodes = n_samples;
  return out;
}

double inner_product_upper_tail_cf(const Spectrum& s, double t, double tol,
                                   std::int64_t* node_count) {
  if (t == 0.0) return 0.5;
  if (t < 0.0) return 1.0 - inner_product_upper_tail_cf(s, -t, tol, node_count);

  std::vector<double> alpha_sq;
  alpha_sq.reserve(s.dim());
  for (double a : s.weights()) alpha_sq.push_back(a * a);

  CfIntegrand f{alpha_sq, t};
  const double quad_tol = tol / 10.0;

  // Truncation point: stop at the earlier of phi(S) < 1e-12 (steep decay,
  // moderate d) and the alternating-tail bound 2 phi(S)/(S t) < quad_tol
  // (shallow decay, small d). S stays on a zero of sin(st); the search
  // grows geometrically because the shallow-decay rule can need S ~ 1e5
  // periods at d = 1.
  const double period = M_PI / t;
  double k = 1.0;
  for (;;) {
    const double phi_s = f.phi(k * period);
    if (phi_s < 1e-12 || 2.0 * phi_s / (k * period * t) < quad_tol) break;
    if (k > 5e6) {
      throw std::runtime_error(
          "inner_product_upper_tail_cf: integrand tail did not decay; t=" + std::to_string(t));
    }
    k = std::ceil(k * 1.25);
  }
  const double S = k * period;

  const double budget = quad_tol / std::max(2.0, k);
  CompensatedSum integral;
  for (double a = 0.0; a < S - 0.5 * period; a += period) {
    integral.add(adaptive_panel(f, a, a + period, budget, 0));
  }
  if (node_count != nullptr) *node_count += f.evals;
  return 0.5 - integral.value() / M_PI;
}

QuantileResult solve_threshold_cf(const Spectrum& s, double p, double tol,
                                  std::size_t max_dim) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("solve_threshold_cf: p must be in (0,1)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("solve_threshold_cf: tol must be > 0");
  if (s.dim() > max_dim) {
    throw std::invalid_argument("solve_threshold_cf: dimension exceeds cap " +
                                std::to_string(max_dim));
  }

  std::int64_t evals = 0;
  const auto tail = [&](double t) {
    return inner_product_upper_tail_cf(s, t, tol, &evals);
  };

  // Bracket: tail is strictly decreasing with full support.
  double lo = -4.0 * s.l2(), hi = 4.0 * s.l2();
  for (int i = 0; i < 60 && tail(lo) < p; ++i) lo *= 2.0;
  for (int i = 0; i < 60 && tail(hi) > p; ++i) hi *= 2.0;
  if (tail(lo) < p || tail(hi) > p) {
    throw std::runtime_error("solve_threshold_cf: failed to bracket the quantile");
  }

  double t = 0.0, achieved = 0.5;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    t = 0.5 * (lo + hi);
    achieved = tail(t);
    if (std::abs(achieved - p) <= 0.9 * tol) {
      converged = true;
      break;
    }
    if (achieved > p) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo < 1e-15 * (1.0 + std::abs(t))) break;
  }
  if (!converged && std::abs(achieved - p) > tol) {
    throw std::runtime_error("solve_threshold_cf: no convergence at tol=" + std::to_string(tol) +
                             " (best |achieved-p|=" + std::to_string(std::abs(achieved - p)) +
                             ")");
  }

  QuantileResult out;
  out.t = t;
  out.achieved_p = achieved;
  out.method = QuantileResult::Method::cf_inversion;
  out.stderr_or_quadrature_bound = tol;
  out.samples_or_nodes = evals;
  return out;
}

}  // namespace geodetect
