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

#ifndef GEODETECT_SPECTRUM_HPP_
#define GEODETECT_SPECTRUM_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace geodetect {

class Spectrum;
struct SpectrumSplit;
SpectrumSplit split(const Spectrum& s);

// Weight vector alpha of the latent coordinate variances: the model
// parameter of the anisotropic ensembles. Immutable after construction,
// sorted nonincreasing, with cached power sums and norms.
//
// Weights may be zero (zero-variance coordinates are inert in every norm)
// but an all-zero spectrum is rejected. Input order is irrelevant; the
// constructor sorts.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> weights);

  static Spectrum flat(std::size_t d);
  // alpha_i = i^{-gamma}, i = 1..d.
  static Spectrum power_law(std::size_t d, double gamma);
  // alpha_i = rho^{i-1}, i = 1..d.
  static Spectrum geometric(std::size_t d, double rho);

  std::size_t dim() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const noexcept { return weights_[i]; }

  double l2() const noexcept { return l2_; }
  double l3() const noexcept { return l3_; }
  double l4() const noexcept { return l4_; }
  double linf() const noexcept { return linf_; }

  // Power sums sum alpha_i^k, compensated.
  double sum_sq() const noexcept { return s2_; }
  double sum_cube() const noexcept { return s3_; }
  double sum_quad() const noexcept { return s4_; }

  bool zero_mass() const noexcept { return s2_ == 0.0; }

 private:
  struct allow_zero_tag {};
  Spectrum(std::vector<double> weights, allow_zero_tag);
  void init_norms();

  friend SpectrumSplit(geodetect::split)(const Spectrum&);

  std::vector<double> weights_;
  double s2_ = 0.0, s3_ = 0.0, s4_ = 0.0;
  double l2_ = 0.0, l3_ = 0.0, l4_ = 0.0, linf_ = 0.0;
};

// (||alpha||_2 / ||alpha||_3)^6, the dimension at which n^3 sits at the
// detection threshold. Computed as S2^3 / S3^2, exact for flat spectra.
double effective_dimension(const Spectrum& s);

// (||alpha||_2 / ||alpha||_4)^4 = S2^2 / S4, the weaker comparison rate.
double comparison_dimension(const Spectrum& s);

// Partition into the shortest prefix alpha_plus holding at least 1/3 of the
// squared mass and the tail alpha_minus. degenerate means the single top
// weight alone exceeds 2/3 of the squared mass; peel-based operations
// reject that case, samplers and statistics do not care.
struct SpectrumSplit {
  std::size_t r = 0;  // prefix length, 1-based count
  Spectrum alpha_plus;
  Spectrum alpha_minus;  // may be empty or zero-mass when degenerate
  bool degenerate = false;
};

struct PeelStep {
  std::size_t t = 0;       // 1..r
  Spectrum alpha_t;        // (alpha_1..alpha_t, alpha_{r+1}..alpha_d)
  double u_t = 0.0;        // alpha_t / ||alpha^t||_2, in (0,1]
};

// Interpolating sequence that adds the large coordinates back one at a
// time; alpha^r reproduces the full spectrum. Rejects degenerate splits.
std::vector<PeelStep> peel_sequence(const Spectrum& s, const SpectrumSplit& sp);
std::vector<PeelStep> peel_sequence(const Spectrum& s);

struct PeelBoundProxy {
  double sum_term = 0.0;             // sum_t (alpha_t/||alpha||_2)^3 n^{3/2}
  double l3_term = 0.0;              // (||alpha||_3/||alpha||_2)^3 n^{3/2}
  double minus_comparison_dim = 0.0; // (||alpha^-||_2/||alpha^-||_4)^4
};

// Diagnostic magnitudes of the peel bound, constants omitted. Rejects
// degenerate splits.
PeelBoundProxy peel_bound_proxy(const Spectrum& s, long n);

}  // namespace geodetect

#endif  // GEODETECT_SPECTRUM_HPP_
