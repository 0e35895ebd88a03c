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
// Instance and corpus generation. Reference-game instances are built from a
// bank of synthetic binary feature contrasts, split into disjoint pretrain
// and RL subsets to prevent data leakage, and a sampled match matrix whose
// target column is all ones; only instances the scripted oracle can solve
// are emitted. Word-game worlds are generated directly. All generation is a
// pure function of (seed, config).

#ifndef FOPO_DATAGEN_H_
#define FOPO_DATAGEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fopo/rng.h"
#include "fopo/rsa.h"
#include "fopo/taboo_env.h"

namespace fopo {

// One binary contrast, e.g. {"f3a", "f3b"}. Tokens are plain alphanumerics so
// they survive the corpus file format and hyphen-joined object names.
struct FeaturePair {
  std::string a;
  std::string b;

  bool operator==(const FeaturePair& o) const = default;
};

struct FeaturePairBanks {
  std::vector<FeaturePair> pretrain;
  std::vector<FeaturePair> rl;
};

// Disjoint banks of synthetic contrast pairs, deterministic in the seed.
FeaturePairBanks BuildFeatureBanks(uint64_t seed, int pretrain_count,
                                   int rl_count);

// Binary match matrix: match[dim][object] is 1 iff the object agrees with
// the target (object 0) on that dimension, so column 0 is all ones and
// columns are distinct.
struct ObjectiveMatrix {
  int num_dims = 0;
  int num_objects = 0;
  std::vector<std::vector<uint8_t>> match;  // [dim][object]
  int min_rounds = 0;  // oracle annotation, set on accepted instances

  void Validate() const;
};

struct DatagenConfig {
  int min_features = 2;
  int max_features = 8;
  int min_objects = 2;
  int max_objects = 12;

  void Validate() const;
};

// Uniform shape draw (object counts capped at the 2^m distinct-column
// limit), then rejection sampling until all columns are distinct.
ObjectiveMatrix SampleMatrix(Rng& rng, const DatagenConfig& config);

// Binds each matrix row to a distinct sampled contrast pair, with the
// target's side of each contrast drawn at random: match-1 entries take the
// target's value, match-0 entries the opposite. Object 0 is the target.
ObjectSet MaterializeInstance(const ObjectiveMatrix& matrix,
                              const std::vector<FeaturePair>& bank, Rng& rng);

// Inverse mapping of materialization (tokens are dropped; agreement with the
// target is kept).
ObjectiveMatrix RecoverMatrix(const ObjectSet& set);

struct GeneratedInstance {
  std::string id;
  ObjectSet objects;
  GoldenChain chain;
};

// `count` solvable instances: matrices are resampled until the scripted
// oracle identifies the target. Ids are `<id_prefix><index>`.
std::vector<GeneratedInstance> GenerateInstances(
    uint64_t seed, int count, const DatagenConfig& config,
    const std::vector<FeaturePair>& bank, const std::string& id_prefix);

// Word-game worlds with per-world random targets.
std::vector<TabooWorld> GenerateTabooWorlds(uint64_t seed, int count,
                                            const TabooEnvConfig& config);

// ---------------------------------------------------------------------------
// Corpus files. Line-oriented, pipe-separated, one record per line, with a
// leading `# fopo-instances v1` / `# fopo-chains v1` comment:
//   instance: id|M|N|target|a0/b0;a1/b1;...|bits;bits;...
//     (bits = object's per-dimension value indices, M characters of 0/1)
//   chain:    id|min_rounds|dim:val;...|size;size;...

std::string FormatInstanceLine(const std::string& id, const ObjectSet& set);
struct InstanceRecord {
  std::string id;
  ObjectSet objects;
};
InstanceRecord ParseInstanceLine(const std::string& line);

std::string FormatChainLine(const std::string& id, const GoldenChain& chain);
struct ChainRecord {
  std::string id;
  int min_rounds = 0;
  std::vector<Feature> features;
  std::vector<int> set_sizes;
};
ChainRecord ParseChainLine(const std::string& line);

// Writes the instance file and the golden-chain file.
void EmitCorpus(const std::vector<GeneratedInstance>& instances,
                const std::string& instances_path,
                const std::string& chains_path);

// Reads an instance file; golden chains are recomputed (and required to
// exist) on load.
std::vector<GeneratedInstance> LoadCorpus(const std::string& instances_path);

}  // namespace fopo

#endif  // FOPO_DATAGEN_H_
