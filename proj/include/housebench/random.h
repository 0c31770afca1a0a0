/*
 * Copyright 2026 The housebench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HOUSEBENCH_RANDOM_H_
#define HOUSEBENCH_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace housebench {

// Seeded generator with platform-independent distributions. The standard
// library distributions are implementation-defined, so uniform/normal/index
// draws are derived from the raw 64-bit engine output here instead.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Independent stream keyed by (seed, stream). Used for per-tree and
  // per-repeat generators so results do not depend on construction order.
  static Rng Stream(uint64_t seed, uint64_t stream);

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Standard normal (Marsaglia polar method).
  double Normal();
  double Normal(double mean, double std) { return mean + std * Normal(); }

  // Uniform integer on [0, n). Requires n > 0.
  size_t UniformIndex(size_t n);

  // Index drawn from unnormalized non-negative weights.
  size_t Categorical(const std::vector<double>& weights);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive well-separated stream seeds.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

// Identity permutation of size n shuffled by `rng`.
std::vector<size_t> RandomPermutation(size_t n, Rng& rng);

}  // namespace housebench

#endif  // HOUSEBENCH_RANDOM_H_
