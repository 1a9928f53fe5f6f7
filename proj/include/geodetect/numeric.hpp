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

#ifndef GEODETECT_NUMERIC_HPP_
#define GEODETECT_NUMERIC_HPP_

#include <cmath>
#include <cstddef>
#include <span>

namespace geodetect {

// Neumaier compensated accumulator. Error stays O(eps) independent of term
// count, which keeps the 1e-12 norm-cache invariant meaningful at d = 1e7.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const noexcept { return sum + comp; }
};

inline double compensated_total(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

}  // namespace geodetect

#endif  // GEODETECT_NUMERIC_HPP_
