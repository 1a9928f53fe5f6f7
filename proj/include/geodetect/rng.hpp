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

#ifndef GEODETECT_RNG_HPP_
#define GEODETECT_RNG_HPP_

#include <cstdint>

namespace geodetect {

// Identifies one reproducible random stream. Identical (master_seed,
// stream_id) yields bit-identical draws regardless of platform, thread
// schedule, or how many other streams were consumed.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// splitmix64 finalizer; bijective on uint64.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child stream; used for parallel block lanes and sampler
// sub-streams. Distinct tags give decorrelated streams under the same seed.
constexpr SeedSpec substream(SeedSpec s, std::uint64_t tag) noexcept {
  return SeedSpec{s.master_seed, mix64(s.stream_id + 0x9e3779b97f4a7c15ULL * (tag + 1))};
}

// Inverse standard normal CDF (Wichura's PPND16 / AS 241), |error| < 1e-15.
// Pure rational-polynomial arithmetic, so draw values are a deterministic
// function of the uniform input.
double norm_quantile(double p);

// Upper-tail quantile: returns t with P(Z >= t) = p.
inline double norm_upper_quantile(double p) { return -norm_quantile(p); }

// P(Z >= x) for Z ~ N(0,1).
double norm_upper_tail(double x);

// Counter-based generator: draw k of stream (master_seed, stream_id) is
// mix64(key + (k+1)*gamma), a pure function of (seed, k). Stateful wrapper
// keeps the counter; value_at() reads any position without disturbing it.
class CounterRng {
 public:
  explicit CounterRng(SeedSpec seed) noexcept
      : key_(derive_key(seed)) {}

  static constexpr std::uint64_t derive_key(SeedSpec s) noexcept {
    return mix64(mix64(s.master_seed ^ 0x8e9c4d1f372a65b1ULL) + s.stream_id);
  }

  std::uint64_t value_at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so the
  // inverse-CDF transform stays finite.
  double uniform_at(std::uint64_t counter) const noexcept {
    return (static_cast<double>(value_at(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian_at(std::uint64_t counter) const {
    return norm_quantile(uniform_at(counter));
  }

  std::uint64_t next_u64() noexcept { return value_at(counter_++); }
  double next_uniform() noexcept { return uniform_at(counter_++); }
  double next_gaussian() { return gaussian_at(counter_++); }

  std::uint64_t counter() const noexcept { return counter_; }
  void set_counter(std::uint64_t c) noexcept { counter_ = c; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace geodetect

#endif  // GEODETECT_RNG_HPP_
