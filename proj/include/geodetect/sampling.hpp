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

#ifndef GEODETECT_SAMPLING_HPP_
#define GEODETECT_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geodetect/rng.hpp"
#include "geodetect/spectrum.hpp"

namespace geodetect {

// Upper-triangle pair indexing shared by graphs and symmetric matrices:
// pairs (i,j), 0 <= i < j < n, in row-major order (0,1),(0,2),...,(n-2,n-1).
inline std::size_t pair_count(std::size_t n) noexcept { return n * (n - 1) / 2; }

inline std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

// Simple undirected graph on [n] stored as a packed bitset over the upper
// triangle, plus the generating edge probability p as metadata.
class GraphSample {
 public:
  GraphSample(std::size_t n, double p);

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }

  bool edge(std::size_t i, std::size_t j) const noexcept {
    const std::size_t k = pair_index(n_, i, j);
    return (bits_[k >> 6] >> (k & 63)) & 1u;
  }
  void set_edge(std::size_t i, std::size_t j, bool present) noexcept {
    const std::size_t k = pair_index(n_, i, j);
    const std::uint64_t mask = std::uint64_t{1} << (k & 63);
    if (present) {
      bits_[k >> 6] |= mask;
    } else {
      bits_[k >> 6] &= ~mask;
    }
  }

  std::size_t edge_count() const noexcept;
  bool operator==(const GraphSample& other) const noexcept;

 private:
  std::size_t n_;
  double p_;
  std::vector<std::uint64_t> bits_;
};

// Symmetric n x n matrix with identically zero diagonal; only the upper
// triangle is stored, in pair order.
class SymMatrixSample {
 public:
  explicit SymMatrixSample(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  double entry(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    return i < j ? upper_[pair_index(n_, i, j)] : upper_[pair_index(n_, j, i)];
  }
  double& upper(std::size_t k) noexcept { return upper_[k]; }
  double upper(std::size_t k) const noexcept { return upper_[k]; }
  const std::vector<double>& upper_entries() const noexcept { return upper_; }
  std::vector<double>& upper_entries() noexcept { return upper_; }

 private:
  std::size_t n_;
  std::vector<double> upper_;
};

// d x n latent data, column i is the vector of vertex i. Column-major.
struct LatentMatrix {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<double> values;  // values[i*d + j] = coordinate j of column i

  double at(std::size_t j, std::size_t i) const noexcept { return values[i * d + j]; }
};

// Latent coordinate (j, column i) is drawn at counter i*d + j, so the
// streamed Gram path below regenerates identical values block by block.
LatentMatrix sample_latent(const Spectrum& s, std::size_t n, SeedSpec seed);

// Erdos-Renyi G(n,p); pair k uses counter k.
GraphSample sample_er(std::size_t n, double p, SeedSpec seed);

// Geometric graph: edge (i,j) present iff <X_i, X_j> >= t, with X the
// latent sample of `seed`. The threshold is supplied by the caller (the
// quantile solve is shared across replicates); p is recorded as metadata.
GraphSample sample_rgg(const Spectrum& s, std::size_t n, double p, double t, SeedSpec seed);

// Scaled diagonal-deleted Gram matrix: W_ij = <X_i, X_j> / ||alpha||_2.
SymMatrixSample sample_wishart(const Spectrum& s, std::size_t n, SeedSpec seed);

// Zero-diagonal symmetric matrix with iid standard Gaussian upper triangle;
// pair k uses counter k.
SymMatrixSample sample_gaussian_matrix(std::size_t n, SeedSpec seed);

// g g^T with the diagonal zeroed.
SymMatrixSample rank_one_deleted(const std::vector<double>& g);

// u * Delta(g) + sqrt(1-u^2) * M'. The noise matrix occupies counters
// [0, n(n-1)/2) and the spike follows, so u = 0 reproduces
// sample_gaussian_matrix(n, seed) bit for bit.
SymMatrixSample sample_spiked(std::size_t n, double u, SeedSpec seed);

// Entry-wise thresholding of a symmetric matrix into a graph: edge iff
// m_ij >= t. Covers both threshold kernels: the Wishart route at
// t_{p,alpha}/||alpha||_2 and the Gaussian route at the normal upper
// quantile of p.
GraphSample threshold_graph(const SymMatrixSample& m, double t, double p);

// Upper-triangle Gram of the latent sample identified by (s, n, seed),
// streamed in coordinate blocks with compensated cross-block accumulation;
// entry k is <X_i, X_j> for pair k. The summation tree is fixed, so values
// do not depend on block schedule.
std::vector<double> latent_gram_upper(const Spectrum& s, std::size_t n, SeedSpec seed);

}  // namespace geodetect

#endif  // GEODETECT_SAMPLING_HPP_
