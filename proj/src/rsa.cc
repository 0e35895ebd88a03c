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

#include "fopo/rsa.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <utility>

#include "fopo/check.h"

namespace fopo {

namespace {

// lcm(1..12): every per-feature candidate count divides it (candidate sets
// hold at most 12 objects), so all inverse counts live exactly on the integer
// grid 1/kCountLcm.
constexpr int64_t kCountLcm = 27720;

// Integer harmonic weight T(o) = kCountLcm * sum_j 1/|f_j(o)| over o's
// features. The speaker likelihood of feature f of o is (kCountLcm/|f|)/T(o),
// and |f| is shared by the entire support of f, so the level-0 posterior
// reduces to P(o|f) = (1/T(o)) / sum_{o' in f} 1/T(o'). Every discrete
// decision below compares these integer weights (or short sums of their
// inverses) instead of materializing normalized fractions, which keeps the
// arithmetic bounded for any in-capacity scene.
int64_t HarmonicT(const ObjectSet& set, const CandidateSet& candidates,
                  int object) {
  int64_t t = 0;
  for (int m = 0; m < set.num_dims(); ++m) {
    int count = FeatureCount(set, candidates, FeatureOf(set, object, m));
    FOPO_CHECK_LE(count, 12);  // kCountLcm covers counts up to 12
    t += kCountLcm / count;
  }
  return t;
}

// Fixed-width 512-bit unsigned integer, little-endian u64 limbs. Sized so
// that cross products of inverse-weight sums can never overflow: with at
// most 12 weights below 2^18, numerators and denominators stay below 2^216
// and their pairwise products below 2^434.
struct Wide {
  std::array<uint64_t, 8> limb{};
};

Wide WideFrom(uint64_t v) {
  Wide w;
  w.limb[0] = v;
  return w;
}

void MulSmall(Wide& w, uint64_t m) {
  unsigned __int128 carry = 0;
  for (uint64_t& l : w.limb) {
    unsigned __int128 cur = static_cast<unsigned __int128>(l) * m + carry;
    l = static_cast<uint64_t>(cur);
    carry = cur >> 64;
  }
  FOPO_CHECK(carry == 0);
}

void AddInPlace(Wide& w, const Wide& o) {
  unsigned __int128 carry = 0;
  for (size_t i = 0; i < w.limb.size(); ++i) {
    unsigned __int128 cur =
        static_cast<unsigned __int128>(w.limb[i]) + o.limb[i] + carry;
    w.limb[i] = static_cast<uint64_t>(cur);
    carry = cur >> 64;
  }
  FOPO_CHECK(carry == 0);
}

Wide Mul(const Wide& a, const Wide& b) {
  // Factors must fit in four limbs so the product fits in eight.
  for (size_t i = 4; i < 8; ++i) {
    FOPO_CHECK(a.limb[i] == 0);
    FOPO_CHECK(b.limb[i] == 0);
  }
  Wide out;
  for (size_t i = 0; i < 4; ++i) {
    unsigned __int128 carry = 0;
    for (size_t j = 0; j < 4; ++j) {
      unsigned __int128 cur =
          static_cast<unsigned __int128>(a.limb[i]) * b.limb[j] +
          out.limb[i + j] + carry;
      out.limb[i + j] = static_cast<uint64_t>(cur);
      carry = cur >> 64;
    }
    out.limb[i + 4] = static_cast<uint64_t>(carry);
  }
  return out;
}

int Compare(const Wide& a, const Wide& b) {
  for (size_t i = a.limb.size(); i > 0; --i) {
    if (a.limb[i - 1] != b.limb[i - 1]) {
      return a.limb[i - 1] < b.limb[i - 1] ? -1 : 1;
    }
  }
  return 0;
}

// Exact sum of inverses over the common denominator prod(terms): returns
// {sum_i prod_{k != i} terms_k, prod_k terms_k}.
std::pair<Wide, Wide> InverseSum(const std::vector<int64_t>& terms) {
  Wide den = WideFrom(1);
  for (int64_t t : terms) {
    FOPO_CHECK_GT(t, 0);
    MulSmall(den, static_cast<uint64_t>(t));
  }
  Wide num;
  for (size_t i = 0; i < terms.size(); ++i) {
    Wide part = WideFrom(1);
    for (size_t k = 0; k < terms.size(); ++k) {
      if (k != i) MulSmall(part, static_cast<uint64_t>(terms[k]));
    }
    AddInPlace(num, part);
  }
  return {num, den};
}

// Sign of sum(1/a_i) - sum(1/b_j), computed exactly.
int CompareInverseSums(const std::vector<int64_t>& a,
                       const std::vector<int64_t>& b) {
  auto [an, ad] = InverseSum(a);
  auto [bn, bd] = InverseSum(b);
  return Compare(Mul(an, bd), Mul(bn, ad));
}

}  // namespace

std::string ObjectSet::ObjectName(int object) const {
  FOPO_CHECK_GE(object, 0);
  FOPO_CHECK_LT(object, num_objects());
  std::string name;
  for (int m = 0; m < num_dims(); ++m) {
    if (m > 0) name += '-';
    name += dim_values[m][objects[object][m]];
  }
  return name;
}

void ObjectSet::Validate() const {
  FOPO_CHECK_GE(num_dims(), 1);
  FOPO_CHECK_GE(num_objects(), 1);
  // The exact-inference arithmetic (kCountLcm grid and the fixed-width
  // inverse-sum comparisons) is sized for these caps.
  FOPO_CHECK_LE(num_dims(), 8);
  FOPO_CHECK_LE(num_objects(), 12);
  FOPO_CHECK_GE(target_index, 0);
  FOPO_CHECK_LT(target_index, num_objects());
  std::set<std::vector<uint8_t>> seen;
  for (const auto& obj : objects) {
    FOPO_CHECK_EQ(static_cast<int>(obj.size()), num_dims());
    for (uint8_t v : obj) FOPO_CHECK_LE(v, 1);
    FOPO_CHECK(seen.insert(obj).second);  // objects must be distinct
  }
}

Feature FeatureOf(const ObjectSet& set, int object, int dim) {
  FOPO_CHECK_GE(dim, 0);
  FOPO_CHECK_LT(dim, set.num_dims());
  return Feature{dim, set.objects[object][dim]};
}

bool HasFeature(const ObjectSet& set, int object, Feature f) {
  return set.objects[object][f.dim] == f.value;
}

CandidateSet FullCandidateSet(const ObjectSet& set) {
  CandidateSet all(set.num_objects());
  for (int i = 0; i < set.num_objects(); ++i) all[i] = i;
  return all;
}

bool Contains(const CandidateSet& candidates, int object) {
  return std::binary_search(candidates.begin(), candidates.end(), object);
}

Rational Posterior::ProbOf(int object) const {
  for (size_t i = 0; i < support.size(); ++i) {
    if (support[i] == object) return probs[i];
  }
  return Rational();
}

int FeatureCount(const ObjectSet& set, const CandidateSet& candidates,
                 Feature f) {
  int count = 0;
  for (int o : candidates) {
    if (HasFeature(set, o, f)) ++count;
  }
  FOPO_CHECK_GE(count, 1);
  return count;
}

Rational SpeakerLikelihood(const ObjectSet& set, const CandidateSet& candidates,
                           int object, Feature f) {
  FOPO_CHECK(HasFeature(set, object, f));
  Rational numerator =
      Rational::FromInt(FeatureCount(set, candidates, f)).Inverse();
  Rational denominator;
  for (int m = 0; m < set.num_dims(); ++m) {
    Feature fm = FeatureOf(set, object, m);
    denominator =
        denominator +
        Rational::FromInt(FeatureCount(set, candidates, fm)).Inverse();
  }
  return numerator / denominator;
}

Posterior L0Posterior(const ObjectSet& set, const CandidateSet& candidates,
                      Feature f) {
  Posterior post;
  std::vector<int64_t> weights;
  for (int o : candidates) {
    if (!HasFeature(set, o, f)) continue;
    post.support.push_back(o);
    weights.push_back(HarmonicT(set, candidates, o));
  }
  FOPO_CHECK(!post.support.empty());
  // P(o|f) = (1/T(o)) / sum_k 1/T(k) = (Z/T(o)) / sum_k (Z/T(k)) over the
  // common denominator Z = lcm of the weights. Materializing the normalized
  // fractions needs Z to fit int64 — ample for inspection-sized scenes; the
  // decision procedures above never materialize posteriors at all.
  int64_t zden = 1;
  for (int64_t t : weights) {
    __int128 l = static_cast<__int128>(zden / std::gcd(zden, t)) * t;
    FOPO_CHECK(l <= INT64_MAX);
    zden = static_cast<int64_t>(l);
  }
  int64_t znum = 0;
  for (int64_t t : weights) znum += zden / t;
  for (int64_t t : weights) post.probs.push_back(Rational(zden / t, znum));
  return post;
}

int TargetRank(const ObjectSet& set, const CandidateSet& candidates,
               Feature f, int target) {
  FOPO_CHECK(HasFeature(set, target, f));
  FOPO_CHECK(Contains(candidates, target));
  // At fixed f the posterior is (1/T(o))/Z, so P(o|f) >= P(target|f) is the
  // reversed integer comparison T(o) <= T(target). Objects lacking f have
  // posterior zero and never reach the target's level.
  const int64_t target_t = HarmonicT(set, candidates, target);
  int rank = 0;
  for (int o : candidates) {
    if (!HasFeature(set, o, f)) continue;
    if (HarmonicT(set, candidates, o) <= target_t) ++rank;
  }
  return rank;
}

Feature SelectFeature(const ObjectSet& set, const CandidateSet& candidates,
                      int target, const std::vector<uint8_t>& used_dims) {
  FOPO_CHECK(Contains(candidates, target));
  FOPO_CHECK_EQ(static_cast<int>(used_dims.size()), set.num_dims());
  int best_dim = -1;
  int best_rank = 0;
  for (int m = 0; m < set.num_dims(); ++m) {
    if (used_dims[m]) continue;
    int rank = TargetRank(set, candidates, FeatureOf(set, target, m), target);
    if (best_dim < 0 || rank < best_rank) {  // strict: ties keep lowest dim
      best_dim = m;
      best_rank = rank;
    }
  }
  if (best_dim < 0) FatalError("SelectFeature: all feature dimensions used");
  return FeatureOf(set, target, best_dim);
}

Posterior L1LiteralPosterior(const ObjectSet& set,
                             const CandidateSet& candidates, Feature f) {
  Posterior post;
  for (int o : candidates) {
    if (HasFeature(set, o, f)) post.support.push_back(o);
  }
  FOPO_CHECK(!post.support.empty());
  Rational uniform(1, static_cast<int64_t>(post.support.size()));
  post.probs.assign(post.support.size(), uniform);
  return post;
}

CandidateSet LiteralFilter(const ObjectSet& set, const CandidateSet& candidates,
                           Feature f) {
  CandidateSet out;
  for (int o : candidates) {
    if (HasFeature(set, o, f)) out.push_back(o);
  }
  return out;
}

CandidateSet BeliefSet(const ObjectSet& set, const CandidateSet& candidates,
                       Feature f) {
  // Harmonic weights of every candidate, shared by all simulated speakers.
  std::vector<int64_t> t_of(set.num_objects(), 0);
  for (int o : candidates) t_of[o] = HarmonicT(set, candidates, o);

  CandidateSet out;
  for (int o : candidates) {
    if (!HasFeature(set, o, f)) continue;
    // Simulated speaker for o: the feature of o maximizing o's own L0
    // posterior, lowest dimension on ties (same rule as the real speaker).
    // P(o|f') = (1/T(o)) / Z(f') with Z(f') = sum_{o' in f'} 1/T(o'), and
    // 1/T(o) is common to all of o's features, so the argmax over features
    // is the argmin of Z.
    int best_dim = -1;
    std::vector<int64_t> best_support;
    for (int m = 0; m < set.num_dims(); ++m) {
      Feature fm = FeatureOf(set, o, m);
      std::vector<int64_t> support;
      for (int o2 : candidates) {
        if (HasFeature(set, o2, fm)) support.push_back(t_of[o2]);
      }
      if (best_dim < 0 || CompareInverseSums(support, best_support) < 0) {
        best_dim = m;
        best_support = std::move(support);
      }
    }
    if (best_dim == f.dim) out.push_back(o);
  }
  return out;
}

CandidateSet ListenerUpdate(const ObjectSet& set, const CandidateSet& candidates,
                            Feature f) {
  CandidateSet belief = BeliefSet(set, candidates, f);
  if (belief.empty()) {
    CandidateSet literal = LiteralFilter(set, candidates, f);
    FOPO_CHECK(!literal.empty());
    return literal;
  }
  // Keep the maximal-L1-posterior subset of the belief set. Belief members
  // all carry f, so their literal posteriors tie and this is the whole belief
  // set; computed as written for fidelity to the update definition.
  Posterior l1 = L1LiteralPosterior(set, candidates, f);
  Rational best;
  for (int o : belief) best = std::max(best, l1.ProbOf(o));
  CandidateSet out;
  for (int o : belief) {
    if (l1.ProbOf(o) == best) out.push_back(o);
  }
  return out;
}

std::optional<GoldenChain> TryComputeGoldenChain(const ObjectSet& set) {
  set.Validate();
  GoldenChain chain;
  CandidateSet candidates = FullCandidateSet(set);
  std::vector<uint8_t> used(set.num_dims(), 0);
  int target = set.target_index;
  while (candidates.size() > 1) {
    bool any_unused = std::count(used.begin(), used.end(), 0) > 0;
    if (!any_unused) return std::nullopt;  // features exhausted
    Feature f = SelectFeature(set, candidates, target, used);
    used[f.dim] = 1;
    CandidateSet next = ListenerUpdate(set, candidates, f);
    if (!Contains(next, target)) return std::nullopt;   // target dropped
    if (next.size() >= candidates.size()) return std::nullopt;  // no progress
    chain.features.push_back(f);
    chain.candidate_sets.push_back(next);
    candidates = std::move(next);
  }
  chain.min_rounds = static_cast<int>(chain.features.size());
  return chain;
}

GoldenChain ComputeGoldenChain(const ObjectSet& set) {
  std::optional<GoldenChain> chain = TryComputeGoldenChain(set);
  if (!chain.has_value()) FatalError("degenerate instance: no golden chain");
  return *chain;
}

namespace {

// Depth-first search over orderings of unused target dimensions. Candidate
// sets only ever shrink, so once the target falls out of a branch the branch
// is dead and is pruned; branches at least as long as the best known solution
// are pruned too.
void ShortestSearch(const ObjectSet& set, const CandidateSet& candidates,
                    std::vector<uint8_t>& used, int depth, int& best) {
  if (depth + 1 >= best) return;  // cannot improve
  for (int m = 0; m < set.num_dims(); ++m) {
    if (used[m]) continue;
    Feature f = FeatureOf(set, set.target_index, m);
    CandidateSet next = ListenerUpdate(set, candidates, f);
    if (!Contains(next, set.target_index)) continue;
    if (next.size() == 1) {
      best = depth + 1;
      continue;
    }
    used[m] = 1;
    ShortestSearch(set, next, used, depth + 1, best);
    used[m] = 0;
  }
}

}  // namespace

std::optional<int> BruteForceMinRounds(const ObjectSet& set) {
  set.Validate();
  constexpr int kUnreached = INT32_MAX;
  int best = kUnreached;
  CandidateSet all = FullCandidateSet(set);
  if (all.size() == 1) return 0;
  std::vector<uint8_t> used(set.num_dims(), 0);
  ShortestSearch(set, all, used, 0, best);
  if (best == kUnreached) return std::nullopt;
  return best;
}

}  // namespace fopo
