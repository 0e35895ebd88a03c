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

#ifndef FOPO_REWARDS_H_
#define FOPO_REWARDS_H_

#include <utility>

#include "fopo/trajectory.h"

namespace fopo {

struct RewardConfig {
  double gamma = 2.0;    // shaping exponent; higher punishes slow games harder
  double epsilon = 0.01; // keeps the slow-game ratio well-defined at T = n
  double delta = 0.8;    // per-own-step backward decay factor

  void Validate() const;
};

// Turn-efficiency reward for a successful identification, shared by both
// players, in [0, 1]:
//   base = T/conv_min                          when T <= conv_min
//        = max(0, (n - T + eps)/(n - conv_min + eps))  otherwise
//   reward = clip(base^gamma, 0, 1)
// T, conv_min and n must share a unit (total turns here; conv_min is the
// oracle-minimal count, n the exhaustion bound). conv_min > n is a
// configuration error.
double RsaTerminalReward(int t_turns, int conv_min, int n,
                         const RewardConfig& config);

// Zero-sum terminal rewards (attacker, defender): +1 winner, -1 loser,
// 0 both on a tie.
std::pair<double, double> TabooTerminalReward(Outcome outcome);

// Fills Trajectory::terminal_reward from the episode outcome. For the
// reference game, `min_rounds` is the oracle-minimal number of speaker
// utterances and `num_dims` the instance's feature count; `rounds_unit`
// selects whether the efficiency reward is computed in speaker rounds rather
// than total turns. Failures score 0 for both players.
void AssignTerminalRewards(Trajectory& trajectory, int min_rounds,
                           int num_dims, bool rounds_unit,
                           const RewardConfig& config);
void AssignTerminalRewards(Trajectory& trajectory,
                           const RewardConfig& config);  // word game

// Backward decay: within each agent's own step sequence, every reward is
// delta times the same agent's next-step reward, anchored at the terminal
// reward on the agent's final step. Re-derives from terminal_reward, so
// applying it twice equals applying it once.
void PropagateDecay(Trajectory& trajectory, const RewardConfig& config);

}  // namespace fopo

#endif  // FOPO_REWARDS_H_
