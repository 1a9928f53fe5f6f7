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

#include "geodetect/sampling.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "geodetect/numeric.hpp"

namespace geodetect {

namespace {
constexpr std::size_t kGramBlock = 4096;
}

GraphSample::GraphSample(std::size_t n, double p)
    : n_(n), p_(p), bits_((pair_count(n) + 63) / 64, 0) {
  if (n < 1) throw std::invalid_argument("GraphSample: n must be >= 1");
}

std::size_t GraphSample::edge_count() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t word : bits_) total += static_cast<std::size_t>(std::popcount(word));
  return total;
}

bool GraphSample::operator==(const GraphSample& other) const noexcept {
  return n_ == other.n_ && bits_ == other.bits_;
}

SymMatrixSample::SymMatrixSample(std::size_t n) : n_(n), upper_(pair_count(n), 0.0) {
  if (n < 1) throw std::invalid_argument("SymMatrixSample: n must be >= 1");
}

LatentMatrix sample_latent(const Spectrum& s, std::size_t n, SeedSpec seed) {
  if (n < 1) throw std::invalid_argument("sample_latent: n must be >= 1");
  const std::size_t d = s.dim();
  std::vector<double> scale(d);
  for (std::size_t j = 0; j < d; ++j) scale[j] = std::sqrt(s.weight(j));

  LatentMatrix x;
  x.d = d;
  x.n = n;
  x.values.resize(d * n);
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * d;
    for (std::size_t j = 0; j < d; ++j) {
      x.values[i * d + j] = scale[j] * rng.gaussian_at(base + j);
    }
  }
  return x;
}

std::vector<double> latent_gram_upper(const Spectrum& s, std::size_t n, SeedSpec seed) {
  const std::size_t d = s.dim();
  const std::size_t np = pair_count(n);
  std::vector<CompensatedSum> acc(np);

  const CounterRng rng(seed);
  std::vector<double> block(n * kGramBlock);
  std::vector<double> scale(kGramBlock);

  for (std::size_t j0 = 0; j0 < d; j0 += kGramBlock) {
    const std::size_t bn = std::min(kGramBlock, d - j0);
    for (std::size_t j = 0; j < bn; ++j) scale[j] = std::sqrt(s.weight(j0 + j));
    for (std::size_t i = 0; i < n; ++i) {
      double* col = &block[i * kGramBlock];
      const std::uint64_t base = static_cast<std::uint64_t>(i) * d + j0;
      for (std::size_t j = 0; j < bn; ++j) {
        col[j] = scale[j] * rng.gaussian_at(base + j);
      }
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double* ci = &block[i * kGramBlock];
      for (std::size_t j = i + 1; j < n; ++j, ++k) {
        const double* cj = &block[j * kGramBlock];
        double partial = 0.0;
        for (std::size_t m = 0; m < bn; ++m) partial += ci[m] * cj[m];
        acc[k].add(partial);
      }
    }
  }

  std::vector<double> gram(np);
  for (std::size_t k = 0; k < np; ++k) gram[k] = acc[k].value();
  return gram;
}

GraphSample sample_er(std::size_t n, double p, SeedSpec seed) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("sample_er: p must be in (0,1)");
  }
  GraphSample g(n, p);
  const CounterRng rng(seed);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (rng.uniform_at(k) < p) g.set_edge(i, j, true);
    }
  }
  return g;
}

GraphSample sample_rgg(const Spectrum& s, std::size_t n, double p, double t, SeedSpec seed) {
  const std::vector<double> gram = latent_gram_upper(s, n, seed);
  GraphSample g(n, p);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (gram[k] >= t) g.set_edge(i, j, true);
    }
  }
  return g;
}

SymMatrixSample sample_wishart(const Spectrum& s, std::size_t n, SeedSpec seed) {
  if (n < 1) throw std::invalid_argument("sample_wishart: n must be >= 1");
  const std::vector<double> gram = latent_gram_upper(s, n, seed);
  const double inv_l2 = 1.0 / s.l2();
  SymMatrixSample m(n);
  for (std::size_t k = 0; k < gram.size(); ++k) m.upper(k) = gram[k] * inv_l2;
  return m;
}

SymMatrixSample sample_gaussian_matrix(std::size_t n, SeedSpec seed) {
  SymMatrixSample m(n);
  const CounterRng rng(seed);
  const std::size_t np = pair_count(n);
  for (std::size_t k = 0; k < np; ++k) m.upper(k) = rng.gaussian_at(k);
  return m;
}

SymMatrixSample rank_one_deleted(const std::vector<double>& g) {
  const std::size_t n = g.size();
  for (double v : g) {
    if (!std::isfinite(v)) throw std::invalid_argument("rank_one_deleted: non-finite input");
  }
  SymMatrixSample m(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) m.upper(k) = g[i] * g[j];
  }
  return m;
}

SymMatrixSample sample_spiked(std::size_t n, double u, SeedSpec seed) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("sample_spiked: u must be in [0,1]");
  }
  SymMatrixSample m(n);
  const CounterRng rng(seed);
  const std::size_t np = pair_count(n);
  std::vector<double> spike(n);
  for (std::size_t i = 0; i < n; ++i) spike[i] = rng.gaussian_at(np + i);
  const double noise_scale = std::sqrt(1.0 - u * u);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      m.upper(k) = u * (spike[i] * spike[j]) + noise_scale * rng.gaussian_at(k);
    }
  }
  return m;
}

GraphSample threshold_graph(const SymMatrixSample& m, double t, double p) {
  GraphSample g(m.n(), p);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < m.n(); ++i) {
    for (std::size_t j = i + 1; j < m.n(); ++j, ++k) {
      if (m.upper(k) >= t) g.set_edge(i, j, true);
    }
  }
  return g;
}

}  // namespace geodetect
