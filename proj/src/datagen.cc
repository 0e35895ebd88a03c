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

#include "fopo/datagen.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "fopo/check.h"
#include "fopo/config.h"

namespace fopo {

namespace {

constexpr int kMaxSampleAttempts = 100000;

int ParseIntOrDie(const std::string& s, const std::string& what) {
  FOPO_CHECK(!s.empty());
  size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(s, &pos);
  } catch (const std::exception&) {
    FatalError("Bad integer for " + what + ": '" + s + "'");
  }
  if (pos != s.size()) {
    FatalError("Bad integer for " + what + ": '" + s + "'");
  }
  return value;
}

}  // namespace

FeaturePairBanks BuildFeatureBanks(uint64_t seed, int pretrain_count,
                                   int rl_count) {
  FOPO_CHECK_GE(pretrain_count, 1);
  FOPO_CHECK_GE(rl_count, 1);
  const int total = pretrain_count + rl_count;
  std::vector<FeaturePair> pool;
  pool.reserve(total);
  for (int k = 0; k < total; ++k) {
    pool.push_back(
        FeaturePair{"f" + std::to_string(k) + "a", "f" + std::to_string(k) + "b"});
  }
  Rng rng(DeriveSeed(seed, 0xba6c, 0, 0));
  rng.Shuffle(pool);
  FeaturePairBanks banks;
  banks.pretrain.assign(pool.begin(), pool.begin() + pretrain_count);
  banks.rl.assign(pool.begin() + pretrain_count, pool.end());
  return banks;
}

void ObjectiveMatrix::Validate() const {
  FOPO_CHECK_GE(num_dims, 1);
  FOPO_CHECK_GE(num_objects, 2);
  FOPO_CHECK_EQ(static_cast<int>(match.size()), num_dims);
  std::set<std::vector<uint8_t>> columns;
  for (int i = 0; i < num_objects; ++i) {
    std::vector<uint8_t> col(num_dims);
    for (int j = 0; j < num_dims; ++j) {
      FOPO_CHECK_EQ(static_cast<int>(match[j].size()), num_objects);
      FOPO_CHECK_LE(match[j][i], 1);
      col[j] = match[j][i];
    }
    FOPO_CHECK(columns.insert(col).second);  // distinct referents
  }
  for (int j = 0; j < num_dims; ++j) {
    FOPO_CHECK_EQ(match[j][0], 1);  // the target matches itself
  }
}

void DatagenConfig::Validate() const {
  FOPO_CHECK_GE(min_features, 2);
  FOPO_CHECK_LE(min_features, max_features);
  FOPO_CHECK_LE(max_features, 8);
  FOPO_CHECK_GE(min_objects, 2);
  FOPO_CHECK_LE(min_objects, max_objects);
  FOPO_CHECK_LE(max_objects, 12);
}

ObjectiveMatrix SampleMatrix(Rng& rng, const DatagenConfig& config) {
  config.Validate();
  const int m = rng.NextInt(config.min_features, config.max_features);
  // Distinct binary columns require n <= 2^m.
  const int n_cap =
      m >= 4 ? config.max_objects : std::min(config.max_objects, 1 << m);
  FOPO_CHECK_GE(n_cap, config.min_objects);
  const int n = rng.NextInt(config.min_objects, n_cap);
  ObjectiveMatrix matrix;
  matrix.num_dims = m;
  matrix.num_objects = n;
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    matrix.match.assign(m, std::vector<uint8_t>(n, 0));
    std::set<std::vector<uint8_t>> columns;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      std::vector<uint8_t> col(m, 1);
      if (i > 0) {
        for (int j = 0; j < m; ++j) {
          col[j] = static_cast<uint8_t>(rng.NextBounded(2));
        }
      }
      ok = columns.insert(col).second;
      if (ok) {
        for (int j = 0; j < m; ++j) matrix.match[j][i] = col[j];
      }
    }
    if (ok) {
      matrix.Validate();
      return matrix;
    }
  }
  FatalError("Could not sample a distinct-column matrix (shape " +
             std::to_string(m) + "x" + std::to_string(n) + ")");
}

ObjectSet MaterializeInstance(const ObjectiveMatrix& matrix,
                              const std::vector<FeaturePair>& bank, Rng& rng) {
  matrix.Validate();
  FOPO_CHECK_GE(static_cast<int>(bank.size()), matrix.num_dims);
  std::vector<int> pair_order(bank.size());
  std::iota(pair_order.begin(), pair_order.end(), 0);
  rng.Shuffle(pair_order);
  ObjectSet set;
  set.target_index = 0;
  std::vector<uint8_t> target_side(matrix.num_dims);
  for (int j = 0; j < matrix.num_dims; ++j) {
    const FeaturePair& pair = bank[pair_order[j]];
    set.dim_values.push_back({pair.a, pair.b});
    target_side[j] = static_cast<uint8_t>(rng.NextBounded(2));
  }
  set.objects.assign(matrix.num_objects,
                     std::vector<uint8_t>(matrix.num_dims, 0));
  for (int i = 0; i < matrix.num_objects; ++i) {
    for (int j = 0; j < matrix.num_dims; ++j) {
      set.objects[i][j] =
          matrix.match[j][i] ? target_side[j]
                             : static_cast<uint8_t>(1 - target_side[j]);
    }
  }
  set.Validate();
  return set;
}

ObjectiveMatrix RecoverMatrix(const ObjectSet& set) {
  set.Validate();
  ObjectiveMatrix matrix;
  matrix.num_dims = set.num_dims();
  matrix.num_objects = set.num_objects();
  matrix.match.assign(matrix.num_dims,
                      std::vector<uint8_t>(matrix.num_objects, 0));
  const std::vector<uint8_t>& target = set.objects[set.target_index];
  for (int j = 0; j < matrix.num_dims; ++j) {
    for (int i = 0; i < matrix.num_objects; ++i) {
      matrix.match[j][i] = set.objects[i][j] == target[j] ? 1 : 0;
    }
  }
  return matrix;
}

std::vector<GeneratedInstance> GenerateInstances(
    uint64_t seed, int count, const DatagenConfig& config,
    const std::vector<FeaturePair>& bank, const std::string& id_prefix) {
  FOPO_CHECK_GE(count, 1);
  std::vector<GeneratedInstance> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(k), 0xda7a, 0));
    GeneratedInstance inst;
    inst.id = id_prefix + std::to_string(k);
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxSampleAttempts && !accepted;
         ++attempt) {
      const ObjectiveMatrix matrix = SampleMatrix(rng, config);
      ObjectSet set = MaterializeInstance(matrix, bank, rng);
      auto chain = TryComputeGoldenChain(set);
      // Emitted instances must be solvable AND have a certified-minimal
      // chain: the reward normalizer treats min_rounds as the shortest
      // rational dialogue, so instances where the rational speaker's chain
      // is longer than the exhaustive-search optimum are rejected.
      if (chain.has_value() &&
          BruteForceMinRounds(set) == chain->min_rounds) {
        inst.objects = std::move(set);
        inst.chain = std::move(*chain);
        accepted = true;
      }
    }
    FOPO_CHECK(accepted);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TabooWorld> GenerateTabooWorlds(uint64_t seed, int count,
                                            const TabooEnvConfig& config) {
  FOPO_CHECK_GE(count, 1);
  std::vector<TabooWorld> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const uint64_t world_seed =
        DeriveSeed(seed, static_cast<uint64_t>(k), 0x7ab0, 0);
    TabooWorld world = GenerateTabooWorld(world_seed, config.num_words,
                                          config.num_cues, config.max_turns);
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(k), 0x7ab0, 1));
    world.target_word = static_cast<int>(rng.NextBounded(
        static_cast<uint64_t>(config.num_words)));
    out.push_back(std::move(world));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus files.

std::string FormatInstanceLine(const std::string& id, const ObjectSet& set) {
  FOPO_CHECK(id.find('|') == std::string::npos);
  std::string line = id + "|" + std::to_string(set.num_dims()) + "|" +
                     std::to_string(set.num_objects()) + "|" +
                     std::to_string(set.target_index) + "|";
  for (int j = 0; j < set.num_dims(); ++j) {
    if (j > 0) line += ";";
    line += set.dim_values[j][0] + "/" + set.dim_values[j][1];
  }
  line += "|";
  for (int i = 0; i < set.num_objects(); ++i) {
    if (i > 0) line += ";";
    for (int j = 0; j < set.num_dims(); ++j) {
      line += set.objects[i][j] ? '1' : '0';
    }
  }
  return line;
}

InstanceRecord ParseInstanceLine(const std::string& line) {
  const std::vector<std::string> fields = SplitString(line, '|');
  if (fields.size() != 6) {
    FatalError("Bad instance line (want 6 pipe-separated fields): " + line);
  }
  InstanceRecord rec;
  rec.id = fields[0];
  const int m = ParseIntOrDie(fields[1], "feature count");
  const int n = ParseIntOrDie(fields[2], "object count");
  rec.objects.target_index = ParseIntOrDie(fields[3], "target index");
  const std::vector<std::string> dims = SplitString(fields[4], ';');
  FOPO_CHECK_EQ(static_cast<int>(dims.size()), m);
  for (const std::string& d : dims) {
    const std::vector<std::string> values = SplitString(d, '/');
    FOPO_CHECK_EQ(values.size(), 2u);
    rec.objects.dim_values.push_back({values[0], values[1]});
  }
  const std::vector<std::string> objects = SplitString(fields[5], ';');
  FOPO_CHECK_EQ(static_cast<int>(objects.size()), n);
  for (const std::string& bits : objects) {
    FOPO_CHECK_EQ(static_cast<int>(bits.size()), m);
    std::vector<uint8_t> values(m);
    for (int j = 0; j < m; ++j) {
      FOPO_CHECK(bits[j] == '0' || bits[j] == '1');
      values[j] = bits[j] == '1' ? 1 : 0;
    }
    rec.objects.objects.push_back(std::move(values));
  }
  rec.objects.Validate();
  return rec;
}

std::string FormatChainLine(const std::string& id, const GoldenChain& chain) {
  std::string line = id + "|" + std::to_string(chain.min_rounds) + "|";
  for (size_t k = 0; k < chain.features.size(); ++k) {
    if (k > 0) line += ";";
    line += std::to_string(chain.features[k].dim) + ":" +
            std::to_string(chain.features[k].value);
  }
  line += "|";
  for (size_t k = 0; k < chain.candidate_sets.size(); ++k) {
    if (k > 0) line += ";";
    line += std::to_string(chain.candidate_sets[k].size());
  }
  return line;
}

ChainRecord ParseChainLine(const std::string& line) {
  const std::vector<std::string> fields = SplitString(line, '|');
  if (fields.size() != 4) {
    FatalError("Bad chain line (want 4 pipe-separated fields): " + line);
  }
  ChainRecord rec;
  rec.id = fields[0];
  rec.min_rounds = ParseIntOrDie(fields[1], "min_rounds");
  for (const std::string& f : SplitString(fields[2], ';')) {
    const std::vector<std::string> parts = SplitString(f, ':');
    FOPO_CHECK_EQ(parts.size(), 2u);
    Feature feature;
    feature.dim = ParseIntOrDie(parts[0], "feature dim");
    feature.value =
        static_cast<uint8_t>(ParseIntOrDie(parts[1], "feature value"));
    rec.features.push_back(feature);
  }
  for (const std::string& s : SplitString(fields[3], ';')) {
    rec.set_sizes.push_back(ParseIntOrDie(s, "set size"));
  }
  FOPO_CHECK_EQ(rec.features.size(), rec.set_sizes.size());
  FOPO_CHECK_EQ(static_cast<int>(rec.features.size()), rec.min_rounds);
  return rec;
}

void EmitCorpus(const std::vector<GeneratedInstance>& instances,
                const std::string& instances_path,
                const std::string& chains_path) {
  std::string instance_file = "# fopo-instances v1\n";
  std::string chain_file = "# fopo-chains v1\n";
  for (const GeneratedInstance& inst : instances) {
    instance_file += FormatInstanceLine(inst.id, inst.objects) + "\n";
    chain_file += FormatChainLine(inst.id, inst.chain) + "\n";
  }
  WriteFileOrDie(instances_path, instance_file);
  WriteFileOrDie(chains_path, chain_file);
}

std::vector<GeneratedInstance> LoadCorpus(const std::string& instances_path) {
  const std::string text = ReadFileOrDie(instances_path);
  std::vector<GeneratedInstance> out;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    InstanceRecord rec = ParseInstanceLine(line);
    GeneratedInstance inst;
    inst.id = std::move(rec.id);
    // Loading only requires solvability: min_rounds (the rational dialogue
    // length) normalizes rewards and is well-defined for any solvable
    // instance. Certified minimality is a property of generated corpora, not
    // a validity condition here.
    inst.chain = ComputeGoldenChain(rec.objects);
    inst.objects = std::move(rec.objects);
    out.push_back(std::move(inst));
  }
  FOPO_CHECK(!out.empty());
  return out;
}

}  // namespace fopo
