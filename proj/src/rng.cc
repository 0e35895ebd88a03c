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

#include "fopo/rng.h"

#include <cmath>

#include "fopo/check.h"

namespace fopo {

namespace {

inline uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t Rng::NextUint64() { return SplitMix64(state_); }

double Rng::NextDouble() {
  return static_cast<double>(NextUint64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::NextBounded(uint64_t bound) {
  FOPO_CHECK_GE(bound, 1u);
  // Rejection sampling over the largest multiple of `bound` below 2^64.
  uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = NextUint64();
    if (r >= threshold) return r % bound;
  }
}

int64_t Rng::NextInt(int64_t lo, int64_t hi) {
  FOPO_CHECK_LE(lo, hi);
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int64_t>(NextBounded(span));
}

double Rng::NextGaussian() {
  // Box–Muller; u1 is kept away from 0 so log() stays finite.
  double u1 = NextDouble();
  double u2 = NextDouble();
  while (u1 <= 0.0) u1 = NextDouble();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::SampleIndex(const std::vector<double>& weights) {
  FOPO_CHECK(!weights.empty());
  double total = 0.0;
  for (double w : weights) {
    FOPO_CHECK_GE(w, 0.0);
    total += w;
  }
  FOPO_CHECK_GT(total, 0.0);
  double u = NextDouble() * total;
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Floating-point round-off can push u past the final partial sum; return the
  // last positive-weight index in that case.
  for (size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0.0) return static_cast<int>(i - 1);
  }
  FatalError("SampleIndex: no positive weight");
}

uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b, uint64_t c) {
  // Absorb each label into the fully mixed previous state, sponge-style. The
  // mix output (not just the advanced counter) must be chained: otherwise
  // small nearby labels only XOR into a near-raw state, where carry
  // cancellations between the labels produce stream collisions.
  uint64_t s = master;
  uint64_t h = SplitMix64(s);
  s = h ^ (a + 0x9e3779b97f4a7c15ULL);
  h = SplitMix64(s);
  s = h ^ (b + 0x7f4a7c159e3779b9ULL);
  h = SplitMix64(s);
  s = h ^ (c + 0x2545f4914f6cdd1dULL);
  return SplitMix64(s);
}

}  // namespace fopo
