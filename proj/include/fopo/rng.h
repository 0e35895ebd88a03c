// Copyright 2026 The Foresight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FOPO_RNG_H_
#define FOPO_RNG_H_

#include <cstdint>
#include <vector>

namespace fopo {

// Counter-based pseudo-random generator (splitmix64). Chosen over
// std::mt19937_64 because its entire state is one u64 — checkpoints carry it
// verbatim — and because std::*_distribution output is implementation-defined,
// which would break the byte-identical-rerun guarantee across toolchains.
// All distributions below are spelled out explicitly for the same reason.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Raw 64 random bits.
  uint64_t NextUint64();

  // Uniform double in [0, 1) with 53 bits of precision.
  double NextDouble();

  // Uniform integer in [0, bound), bound >= 1. Rejection-sampled (no modulo
  // bias).
  uint64_t NextBounded(uint64_t bound);

  // Uniform integer in [lo, hi] inclusive.
  int64_t NextInt(int64_t lo, int64_t hi);

  // Standard normal via Box–Muller. Uses two uniforms per call and discards
  // the paired value so the state stays a single u64.
  double NextGaussian();

  // Samples an index from an unnormalized non-negative weight vector.
  int SampleIndex(const std::vector<double>& weights);

  // Fisher–Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = NextBounded(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  uint64_t state() const { return state_; }
  void set_state(uint64_t state) { state_ = state; }

 private:
  uint64_t state_;
};

// Deterministic seed derivation: hashes a stream label into a master seed so
// that every consumer (episode, phase, worker) gets an independent stream that
// is a pure function of (master seed, labels).
uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b = 0,
                    uint64_t c = 0);

}  // namespace fopo

#endif  // FOPO_RNG_H_
