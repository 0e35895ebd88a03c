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

#ifndef FOPO_CONFIG_H_
#define FOPO_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fopo {

// Round-trip-exact double formatting (max_digits10): a value written to a
// manifest and parsed back compares bit-identical.
std::string FormatDouble(double v);
double ParseDouble(const std::string& s);

// Flat key=value text config. Lines are `key=value`; blank lines and lines
// starting with '#' are ignored. Keys are unique; later assignments override
// earlier ones. Serialization emits keys in sorted order so identical
// settings produce identical bytes.
class KeyValueConfig {
 public:
  void Set(const std::string& key, const std::string& value);
  bool Has(const std::string& key) const;
  const std::string& Get(const std::string& key) const;

  static KeyValueConfig Parse(const std::string& text);
  static KeyValueConfig Load(const std::string& path);
  std::string Serialize() const;
  void Save(const std::string& path) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// Every tunable in the artifact, resolved with defaults. A RunSettings can be
// dumped to a manifest and reconstructed from it exactly, which is what makes
// any command reproducible from its manifest alone.
struct RunSettings {
  // Run identity.
  std::string game = "rsa";       // rsa | taboo
  std::string algo = "fopo";      // ppo | grpo | fopo | gr_fopo
  uint64_t seed = 1;
  std::string out_dir = "out";
  int workers = 1;

  // Policy parameterization.
  bool hidden = false;            // optional tanh hidden layer
  int hidden_dim = 16;

  // Optimizer.
  double alpha = 1e-5;            // RL learning rate
  double pretrain_alpha = 5e-5;
  double beta = 0.1;              // RL KL coefficient
  double pretrain_beta = 0.01;
  double eta = 0.1;               // foresight weight
  double clip_epsilon = 0.2;
  int group_size = 4;
  int batch_size = 16;            // recorded; RL batches = one collection phase
  int pretrain_batch = 32;
  int epochs = 1;                 // optimizer epochs per collected batch
  double grad_norm_cap = 10.0;
  std::string foresight_direction = "counterpart";  // counterpart | self
  std::string group_norm = "std";                   // std | no_std

  // Rewards.
  double reward_gamma = 2.0;
  double reward_epsilon = 0.01;
  double decay_delta = 0.8;
  std::string reward_turn_unit = "turns";  // turns | rounds

  // Self-play loop.
  int phases = 200;
  int episodes_per_phase = 256;
  int checkpoint_every = 10;
  int keep_last = 5;
  double entropy_floor = 0.01;
  bool halt_on_collapse = false;
  int pretrain_epochs = 30;

  // Data generation.
  int pretrain_pairs = 86;
  int rl_pairs = 25;
  int pretrain_count = 500;
  int rl_count = 1000;
  int min_features = 2;
  int max_features = 8;
  int min_objects = 2;
  int max_objects = 12;

  // Taboo world.
  int taboo_words = 8;
  int taboo_cues = 12;
  int taboo_max_turns = 8;
  int taboo_top_k = 3;
  double taboo_guess_threshold = 0.9;

  // Evaluation.
  int eval_episodes = 1000;

  // Artifact paths (inputs).
  std::string instances;        // instance corpus for train/eval
  std::string chains;           // golden-chain corpus for pretraining
  std::string init_checkpoint;  // starting parameters for train
  std::string checkpoint;       // parameters under evaluation
  std::string checkpoint_dir;   // tournament input directory

  // Parses from a key=value config; unknown keys are an error (typos must not
  // silently fall back to defaults). Returns defaults for absent keys.
  static RunSettings FromKeyValue(const KeyValueConfig& kv);
  KeyValueConfig ToKeyValue() const;
};

// Filesystem helpers shared by corpus/metrics writers.
std::string ReadFileOrDie(const std::string& path);
void WriteFileOrDie(const std::string& path, const std::string& contents);
std::vector<std::string> SplitString(const std::string& s, char sep);

}  // namespace fopo

#endif  // FOPO_CONFIG_H_
