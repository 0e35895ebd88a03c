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
// Cooperative reference game. The speaker utters one feature of its target
// per turn; the listener either filters candidates literally, applies the
// pragmatic belief-set update, or declares an object. Identification succeeds
// when the candidate set reaches the singleton target (a post-update
// singleton ends the game immediately, with the implied declaration counted
// as the listener's turn) and fails when the target is excluded, a wrong
// object is declared, or the speaker runs out of unused features.

#ifndef FOPO_RSA_ENV_H_
#define FOPO_RSA_ENV_H_

#include <optional>
#include <string>
#include <vector>

#include "fopo/rsa.h"
#include "fopo/trajectory.h"

namespace fopo {

inline constexpr uint32_t kRsaFeatureMapId = 1;

// Listener action indices; speaker actions are the feature-dimension indices
// directly.
inline constexpr int kListenerLiteralUpdate = 0;
inline constexpr int kListenerPragmaticUpdate = 1;
inline constexpr int kListenerDeclareBase = 2;  // declare(object j) = 2 + j

// Capacity bounds shared by every instance a policy will face; they fix the
// feature layout and action-space size, so the parameter count is constant
// across a run.
struct RsaEnvConfig {
  int max_dims = 8;
  int max_objects = 12;

  int MaxActions() const;
  ModelShape Shape(bool hidden, int hidden_dim) const;
};

class RsaEnv : public Environment {
 public:
  // The instance is copied; `id` names it in trajectories.
  RsaEnv(const RsaEnvConfig& config, ObjectSet instance, std::string id);

  void Reset() override;
  bool IsTerminal() const override { return IsTerminal_(outcome_); }
  Outcome outcome() const override { return outcome_; }
  int turn_index() const override { return turn_; }
  RoleContext MakeRoleContext() const override;
  StateFeatures MakeStateFeatures() const override;
  std::vector<int> LegalActions() const override;
  void Step(int action) override;
  int OracleAction() const override;
  void AssignRewards(Trajectory& trajectory, const RewardConfig& config,
                     bool rounds_unit) const override;
  int OracleMinTurns() const override { return 2 * min_rounds(); }
  std::string InstanceId() const override { return id_; }
  ModelShape Shape() const override { return shape_; }
  uint32_t FeatureMapId() const override { return kRsaFeatureMapId; }
  uint32_t GameId() const override { return kGameIdRsa; }

  // Oracle-minimal speaker rounds; aborts when the instance has no scripted
  // solution (shaped rewards would be undefined there).
  int min_rounds() const;
  bool HasGoldenChain() const { return golden_.has_value(); }

  const ObjectSet& instance() const { return instance_; }
  const CandidateSet& candidates() const { return candidates_; }
  const std::vector<uint8_t>& used_dims() const { return used_dims_; }
  // Feature uttered on the most recent speaker turn; only valid when the
  // listener is to act.
  Feature LastFeature() const;

 private:
  static bool IsTerminal_(Outcome o) { return o != Outcome::kOngoing; }
  void CheckSpeakerExhaustion();

  RsaEnvConfig config_;
  ObjectSet instance_;
  std::string id_;
  ModelShape shape_;
  std::optional<GoldenChain> golden_;

  Outcome outcome_ = Outcome::kOngoing;
  int turn_ = 0;
  CandidateSet candidates_;
  std::vector<uint8_t> used_dims_;
  std::vector<Feature> uttered_;
};

}  // namespace fopo

#endif  // FOPO_RSA_ENV_H_
