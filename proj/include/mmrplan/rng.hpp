// Copyright 2026 The mmrplan Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMRPLAN_RNG_HPP
#define MMRPLAN_RNG_HPP

#include <cstdint>
#include <random>

namespace mmrplan {

/// Seeded generator with reproducible draws independent of the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform index in [0, n).
  size_t index(size_t n) { return static_cast<size_t>(gen_() % n); }

  double normal(double mean, double std) {
    // Box-Muller on two fixed draws keeps the stream deterministic.
    const double u1 = std::max(uniform01(), 1e-300);
    const double u2 = uniform01();
    return mean +
           std * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mmrplan

#endif  // MMRPLAN_RNG_HPP
