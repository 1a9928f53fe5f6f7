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

#include "geodetect/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "geodetect/numeric.hpp"

namespace geodetect {

Spectrum::Spectrum(std::vector<double> weights)
    : Spectrum(std::move(weights), allow_zero_tag{}) {
  if (s2_ == 0.0) {
    throw std::invalid_argument("Spectrum: all-zero weight vector");
  }
}

Spectrum::Spectrum(std::vector<double> weights, allow_zero_tag)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    // Zero-mass placeholder used by split() for an empty tail.
    return;
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("Spectrum: weights must be finite and >= 0");
    }
  }
  std::sort(weights_.begin(), weights_.end(), std::greater<double>());
  init_norms();
}

void Spectrum::init_norms() {
  CompensatedSum s2, s3, s4;
  for (double w : weights_) {
    const double w2 = w * w;
    s2.add(w2);
    s3.add(w2 * w);
    s4.add(w2 * w2);
  }
  s2_ = s2.value();
  s3_ = s3.value();
  s4_ = s4.value();
  l2_ = std::sqrt(s2_);
  l3_ = std::cbrt(s3_);
  l4_ = std::sqrt(std::sqrt(s4_));
  linf_ = weights_.empty() ? 0.0 : weights_.front();
}

Spectrum Spectrum::flat(std::size_t d) {
  return Spectrum(std::vector<double>(d, 1.0));
}

Spectrum Spectrum::power_law(std::size_t d, double gamma) {
  std::vector<double> w(d);
  for (std::size_t i = 0; i < d; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), -gamma);
  }
  return Spectrum(std::move(w));
}

Spectrum Spectrum::geometric(std::size_t d, double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("Spectrum::geometric: rho must be > 0");
  }
  std::vector<double> w(d);
  double v = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    w[i] = v;
    v *= rho;
  }
  return Spectrum(std::move(w));
}

double effective_dimension(const Spectrum& s) {
  const double s2 = s.sum_sq();
  const double s3 = s.sum_cube();
  return (s2 * s2 * s2) / (s3 * s3);
}

double comparison_dimension(const Spectrum& s) {
  const double s2 = s.sum_sq();
  return (s2 * s2) / s.sum_quad();
}

SpectrumSplit split(const Spectrum& s) {
  const auto w = s.weights();
  const double total = s.sum_sq();
  CompensatedSum prefix;
  std::size_t r = w.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    prefix.add(w[i] * w[i]);
    if (prefix.value() >= total / 3.0) {
      r = i + 1;
      break;
    }
  }
  const double prefix_sq = prefix.value();
  const bool degenerate = prefix_sq > (2.0 / 3.0) * total;

  std::vector<double> head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
  std::vector<double> tail(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
  SpectrumSplit out{r, Spectrum(std::move(head)),
                    Spectrum(std::move(tail), Spectrum::allow_zero_tag{}), degenerate};
  return out;
}

std::vector<PeelStep> peel_sequence(const Spectrum& s, const SpectrumSplit& sp) {
  if (sp.degenerate) {
    throw std::invalid_argument(
        "peel_sequence: degenerate split (top weight holds > 2/3 of squared mass)");
  }
  const auto w = s.weights();
  const double tail_sq = sp.alpha_minus.sum_sq();

  std::vector<PeelStep> steps;
  steps.reserve(sp.r);
  CompensatedSum prefix;
  for (std::size_t t = 1; t <= sp.r; ++t) {
    const double wt = w[t - 1];
    prefix.add(wt * wt);

    std::vector<double> interp;
    interp.reserve(t + (w.size() - sp.r));
    interp.insert(interp.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t));
    interp.insert(interp.end(), w.begin() + static_cast<std::ptrdiff_t>(sp.r), w.end());

    const double u = wt / std::sqrt(prefix.value() + tail_sq);
    steps.push_back(PeelStep{t, Spectrum(std::move(interp)), u});
  }
  return steps;
}

std::vector<PeelStep> peel_sequence(const Spectrum& s) {
  return peel_sequence(s, split(s));
}

PeelBoundProxy peel_bound_proxy(const Spectrum& s, long n) {
  const SpectrumSplit sp = split(s);
  if (sp.degenerate) {
    throw std::invalid_argument("peel_bound_proxy: degenerate split");
  }
  const double n32 = std::pow(static_cast<double>(n), 1.5);
  const double l2 = s.l2();

  CompensatedSum sum_cubes;
  const auto w = s.weights();
  for (std::size_t t = 0; t < sp.r; ++t) {
    const double ratio = w[t] / l2;
    sum_cubes.add(ratio * ratio * ratio);
  }

  PeelBoundProxy out;
  out.sum_term = sum_cubes.value() * n32;
  const double l3_ratio = s.l3() / l2;
  out.l3_term = l3_ratio * l3_ratio * l3_ratio * n32;
  out.minus_comparison_dim = comparison_dimension(sp.alpha_minus);
  return out;
}

}  // namespace geodetect
