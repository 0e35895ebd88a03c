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

#ifndef FOPO_TRAJECTORY_H_
#define FOPO_TRAJECTORY_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fopo/policy.h"

namespace fopo {

struct RewardConfig;  // rewards.h

enum class Outcome {
  kOngoing = 0,
  kRsaSuccess,
  kRsaFailure,
  kAttackerWin,
  kDefenderWin,
  kTie,
};

inline bool IsTerminal(Outcome o) { return o != Outcome::kOngoing; }
const char* OutcomeName(Outcome o);

// One agent step: the acting role, snapshots of what the policy saw, the
// sampled action, the log-probability under the collection-time (behavior)
// parameters, and — after propagation — the per-step reward.
struct StepRecord {
  Role role = Role::kAgent1;
  RoleContext ctx;
  StateFeatures features;
  int action = 0;
  double behavior_log_prob = 0.0;
  double reward = 0.0;
};

// One complete self-play episode.
struct Trajectory {
  std::string instance_id;
  std::vector<StepRecord> steps;
  Outcome outcome = Outcome::kOngoing;
  int total_turns = 0;  // T: all turns, both agents
  uint64_t seed = 0;
  // Terminal reward per agent (index by role), assigned before decay
  // propagation. Agent 1 / agent 2 own the even / odd steps respectively.
  std::array<double, 2> terminal_reward = {0.0, 0.0};
};

// Turn-alternating two-player game contract. Agent 1 acts on even turn
// indices, agent 2 on odd ones; terminal states expose an outcome and refuse
// further steps.
class Environment {
 public:
  virtual ~Environment() = default;

  // Restarts the episode on the environment's current instance.
  virtual void Reset() = 0;

  virtual bool IsTerminal() const = 0;
  virtual Outcome outcome() const = 0;
  virtual int turn_index() const = 0;
  Role CurrentRole() const {
    return turn_index() % 2 == 0 ? Role::kAgent1 : Role::kAgent2;
  }

  // Role conditioning and features for the acting agent. Only valid on
  // non-terminal states.
  virtual RoleContext MakeRoleContext() const = 0;
  virtual StateFeatures MakeStateFeatures() const = 0;

  virtual std::vector<int> LegalActions() const = 0;
  virtual void Step(int action) = 0;

  // Scripted reference play for the acting agent (rational Bayesian play for
  // the reference game, the documented heuristic for the word game). Used for
  // pretraining targets and oracle-vs-oracle evaluation.
  virtual int OracleAction() const = 0;

  // Fills trajectory.terminal_reward for an episode played on this
  // environment's instance. `rounds_unit` selects the speaker-round unit for
  // the reference game's efficiency reward and is ignored by the word game.
  virtual void AssignRewards(Trajectory& trajectory, const RewardConfig& config,
                             bool rounds_unit) const = 0;

  // Total turns scripted play needs on this instance, or 0 when the game has
  // no oracle-minimal length.
  virtual int OracleMinTurns() const = 0;

  // Identity of the current instance, recorded into trajectories.
  virtual std::string InstanceId() const = 0;

  // Policy shape shared by both roles of this environment.
  virtual ModelShape Shape() const = 0;
  virtual uint32_t FeatureMapId() const = 0;
  virtual uint32_t GameId() const = 0;
};

}  // namespace fopo

#endif  // FOPO_TRAJECTORY_H_
