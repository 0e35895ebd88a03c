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
// Competitive word-association game, abstracted to symbols. The attacker
// plays cues trying to induce the defender into uttering a secret target
// word; the defender answers each cue with one of the cue's top associated
// words, or commits to a single guess of the target. Uttering the target
// loses for the defender, a correct guess wins, a wrong guess loses
// immediately, and an undecided game at the turn limit is a tie. Cue and
// word alphabets are disjoint, so the attacker can never utter the target
// itself.

#ifndef FOPO_TABOO_ENV_H_
#define FOPO_TABOO_ENV_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fopo/rng.h"
#include "fopo/trajectory.h"

namespace fopo {

inline constexpr uint32_t kTabooFeatureMapId = 2;

// Association world: K words, C cues, row-normalized positive association
// weights. Every word's highest-weight cue is unique to it (the word's
// "signature"), which keeps worlds informative.
struct TabooWorld {
  int num_words = 0;
  int num_cues = 0;
  std::vector<std::vector<double>> weights;  // [word][cue], rows sum to 1
  int target_word = 0;
  int max_turns = 8;

  void Validate() const;
  // Words associated with `cue`, strongest first (ties to the lower index),
  // truncated to top_k.
  std::vector<int> TopWords(int cue, int top_k) const;
};

// Deterministic world generation; aborts on degenerate sizes (K < 4 or
// C < K). The target is not part of the world structure and is set by the
// caller; rows are built so that word w's signature cue is cue w.
TabooWorld GenerateTabooWorld(uint64_t seed, int num_words, int num_cues,
                              int max_turns);

// Naive-Bayes posterior over words given the cue history (uniform prior),
// computable by the defender since the association table is common knowledge.
std::vector<double> WordPosterior(const TabooWorld& world,
                                  const std::vector<int>& cue_history);

struct TabooEnvConfig {
  int num_words = 8;
  int num_cues = 12;
  int max_turns = 8;
  int top_k = 3;                  // defender respond slots per cue
  double guess_threshold = 0.9;   // oracle heuristic's guess trigger

  int MaxActions() const;
  ModelShape Shape(bool hidden, int hidden_dim) const;
};

// Defender action encoding: slots [0, top_k) respond with the corresponding
// top word of the last cue; top_k + w guesses word w. Attacker actions are
// cue indices.
class TabooEnv : public Environment {
 public:
  TabooEnv(const TabooEnvConfig& config, TabooWorld world, std::string id);

  void Reset() override;
  bool IsTerminal() const override { return outcome_ != Outcome::kOngoing; }
  Outcome outcome() const override { return outcome_; }
  int turn_index() const override { return turn_; }
  RoleContext MakeRoleContext() const override;
  StateFeatures MakeStateFeatures() const override;
  std::vector<int> LegalActions() const override;
  void Step(int action) override;
  int OracleAction() const override;
  void AssignRewards(Trajectory& trajectory, const RewardConfig& config,
                     bool rounds_unit) const override;
  int OracleMinTurns() const override { return 0; }
  std::string InstanceId() const override { return id_; }
  ModelShape Shape() const override { return shape_; }
  uint32_t FeatureMapId() const override { return kTabooFeatureMapId; }
  uint32_t GameId() const override { return kGameIdTaboo; }

  const TabooWorld& world() const { return world_; }
  const std::vector<int>& cue_history() const { return cue_history_; }

 private:
  TabooEnvConfig config_;
  TabooWorld world_;
  std::string id_;
  ModelShape shape_;

  Outcome outcome_ = Outcome::kOngoing;
  int turn_ = 0;
  std::vector<int> cue_history_;
  std::vector<int> response_history_;
};

}  // namespace fopo

#endif  // FOPO_TABOO_ENV_H_
