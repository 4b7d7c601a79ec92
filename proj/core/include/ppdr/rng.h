// Copyright 2026 The PPDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPDR_RNG_H_
#define PPDR_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace ppdr {

// Deterministic random source. std::mt19937_64 has a standardized output
// sequence; the distributions below are implemented here instead of using
// <random>'s, whose algorithms are implementation-defined, so that seeded
// runs agree across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream keyed by (seed, stream); used for per-row and
  // per-task randomness so that results do not depend on scheduling.
  static Rng Substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Uniform real in [0, 1) with 53 random bits.
  double UniformReal();

  double StandardNormal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// SplitMix64 finalizer; exposed for deriving seeds.
std::uint64_t MixSeed(std::uint64_t x);

}  // namespace ppdr

#endif  // PPDR_RNG_H_
