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
//
// Exact Bayesian reference-game inference: the rational speaker ranks its
// target's features by how high they push the target in the level-0 listener
// posterior; the pragmatic listener keeps exactly those candidates for which
// a simulated rational speaker would have uttered the observed feature.
// Posterior comparisons decide discrete choices, and floating-point ties must
// not flip them, so every decision procedure runs on an exact integer
// reformulation (harmonic feature-count weights) whose magnitudes are bounded
// by construction; materialized probabilities are exact rationals.

#ifndef FOPO_RSA_H_
#define FOPO_RSA_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fopo/rational.h"

namespace fopo {

// A reference-game instance: N distinct objects (at most 12) over M binary
// feature dimensions (at most 8), plus the index of the speaker's target.
// Each dimension has two named values; objects store a value index (0/1) per
// dimension. The size caps are what the exact inference arithmetic is sized
// for; Validate enforces them.
struct ObjectSet {
  std::vector<std::array<std::string, 2>> dim_values;  // [M][value]
  std::vector<std::vector<uint8_t>> objects;           // [N][M] value indices
  int target_index = 0;

  int num_dims() const { return static_cast<int>(dim_values.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }
  // Hyphen-joined value names, e.g. "dry-blue-smooth-circle".
  std::string ObjectName(int object) const;
  // Aborts unless objects are distinct, well-shaped, and the target is valid.
  void Validate() const;
};

// One binary feature: a dimension plus which of its two values.
struct Feature {
  int dim = 0;
  uint8_t value = 0;

  bool operator==(const Feature& o) const = default;
  const std::string& Name(const ObjectSet& set) const {
    return set.dim_values[dim][value];
  }
};

// The feature of `object` on dimension `dim`.
Feature FeatureOf(const ObjectSet& set, int object, int dim);
bool HasFeature(const ObjectSet& set, int object, Feature f);

// Current candidate set: sorted object indices into the ObjectSet.
using CandidateSet = std::vector<int>;

CandidateSet FullCandidateSet(const ObjectSet& set);
bool Contains(const CandidateSet& candidates, int object);

// Exact posterior over the objects that carry the conditioning feature.
struct Posterior {
  std::vector<int> support;      // object indices
  std::vector<Rational> probs;   // aligned with support; sums to 1 exactly

  Rational ProbOf(int object) const;  // 0 when outside the support
};

// Number of candidate objects possessing feature f (|f|). Aborts when zero:
// callers only ever count features carried by some candidate.
int FeatureCount(const ObjectSet& set, const CandidateSet& candidates,
                 Feature f);

// P(f | o, O) = |f|^-1 / sum_{f' of o} |f'|^-1 over the candidate set. The
// likelihoods of all of o's features sum to 1.
Rational SpeakerLikelihood(const ObjectSet& set, const CandidateSet& candidates,
                           int object, Feature f);

// Level-0 listener posterior: uniform prior times speaker likelihood,
// normalized over the candidates possessing f.
Posterior L0Posterior(const ObjectSet& set, const CandidateSet& candidates,
                      Feature f);

// Inclusive posterior rank of the target under feature f:
// |{o : P_L0(o|f) >= P_L0(target|f)}|. Ties share the better rank, so the
// count includes every tied object.
int TargetRank(const ObjectSet& set, const CandidateSet& candidates,
               Feature f, int target);

// The rational speaker's choice: the unused target feature of minimal target
// rank; rank ties resolve to the lowest dimension index. used_dims flags
// dimensions already uttered. Aborts when every dimension is used.
Feature SelectFeature(const ObjectSet& set, const CandidateSet& candidates,
                      int target, const std::vector<uint8_t>& used_dims);

// Literal listener posterior: uniform over the candidates possessing f.
Posterior L1LiteralPosterior(const ObjectSet& set,
                             const CandidateSet& candidates, Feature f);

// Candidates possessing f, with no pragmatic reasoning.
CandidateSet LiteralFilter(const ObjectSet& set, const CandidateSet& candidates,
                           Feature f);

// Pragmatic speaker simulation: keep o iff argmax_{f' of o} P_L0(o|f') equals
// the observed feature (argmax ties resolve to the lowest dimension, the same
// rule the speaker uses). May be empty.
CandidateSet BeliefSet(const ObjectSet& set, const CandidateSet& candidates,
                       Feature f);

// The pragmatic listener's next candidate set: the maximal-L1-posterior subset
// of the belief set; an empty belief set falls back to the literal filter.
CandidateSet ListenerUpdate(const ObjectSet& set, const CandidateSet& candidates,
                            Feature f);

// Oracle-optimal dialogue: alternating SelectFeature / ListenerUpdate until
// the candidate set is the singleton target.
struct GoldenChain {
  std::vector<Feature> features;             // speaker utterances, in order
  std::vector<CandidateSet> candidate_sets;  // post-update sets, one per turn
  int min_rounds = 0;                        // number of speaker utterances
};

// Empty result when the instance is degenerate: a chain step dropped the
// target, failed to shrink the candidate set, or exhausted the dimensions
// before reaching a singleton.
std::optional<GoldenChain> TryComputeGoldenChain(const ObjectSet& set);

// As above, aborting on degenerate instances.
GoldenChain ComputeGoldenChain(const ObjectSet& set);

// Exhaustive shortest identification search: the minimal number of speaker
// utterances, over every ordering of distinct target-feature dimensions, after
// which pragmatic listener updates reach the singleton target. Empty when no
// ordering reaches it. The rational speaker's chain is not always this short;
// the corpus generator rejects instances where the two lengths differ, so on
// generated instances min_rounds is certified minimal.
std::optional<int> BruteForceMinRounds(const ObjectSet& set);

}  // namespace fopo

#endif  // FOPO_RSA_H_
