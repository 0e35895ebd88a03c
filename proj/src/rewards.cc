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

#include "fopo/rewards.h"

#include <algorithm>
#include <cmath>

#include "fopo/check.h"

namespace fopo {

const char* OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kOngoing: return "ongoing";
    case Outcome::kRsaSuccess: return "rsa_success";
    case Outcome::kRsaFailure: return "rsa_failure";
    case Outcome::kAttackerWin: return "attacker_win";
    case Outcome::kDefenderWin: return "defender_win";
    case Outcome::kTie: return "tie";
  }
  FatalError("unknown outcome");
}

void RewardConfig::Validate() const {
  FOPO_CHECK_GT(gamma, 0.0);
  FOPO_CHECK_GT(epsilon, 0.0);
  FOPO_CHECK_GT(delta, 0.0);
  FOPO_CHECK_LT(delta, 1.0);
}

double RsaTerminalReward(int t_turns, int conv_min, int n,
                         const RewardConfig& config) {
  config.Validate();
  FOPO_CHECK_GE(t_turns, 1);
  FOPO_CHECK_GE(conv_min, 1);
  if (conv_min > n) {
    FatalError("reward unit mismatch: conv_min exceeds the turn bound n");
  }
  double base;
  if (t_turns <= conv_min) {
    base = static_cast<double>(t_turns) / conv_min;
  } else {
    base = std::max(0.0, (n - t_turns + config.epsilon) /
                             (n - conv_min + config.epsilon));
  }
  return std::clamp(std::pow(base, config.gamma), 0.0, 1.0);
}

std::pair<double, double> TabooTerminalReward(Outcome outcome) {
  switch (outcome) {
    case Outcome::kAttackerWin: return {1.0, -1.0};
    case Outcome::kDefenderWin: return {-1.0, 1.0};
    case Outcome::kTie: return {0.0, 0.0};
    default:
      FatalError("TabooTerminalReward: outcome is not terminal");
  }
}

void AssignTerminalRewards(Trajectory& trajectory, int min_rounds,
                           int num_dims, bool rounds_unit,
                           const RewardConfig& config) {
  FOPO_CHECK(IsTerminal(trajectory.outcome));
  if (trajectory.outcome != Outcome::kRsaSuccess) {
    FOPO_CHECK(trajectory.outcome == Outcome::kRsaFailure);
    trajectory.terminal_reward = {0.0, 0.0};
    return;
  }
  int t = trajectory.total_turns;
  int conv_min = min_rounds;
  int n = num_dims;
  if (!rounds_unit) {
    // Total-turn units: the game always ends on a listener turn, so T is
    // even and converts exactly.
    conv_min = 2 * min_rounds;
    n = 2 * num_dims;
  } else {
    FOPO_CHECK_EQ(t % 2, 0);
    t = t / 2;
  }
  double r = RsaTerminalReward(t, conv_min, n, config);
  trajectory.terminal_reward = {r, r};
}

void AssignTerminalRewards(Trajectory& trajectory,
                           const RewardConfig& config) {
  config.Validate();
  auto [attacker, defender] = TabooTerminalReward(trajectory.outcome);
  trajectory.terminal_reward = {attacker, defender};
}

void PropagateDecay(Trajectory& trajectory, const RewardConfig& config) {
  config.Validate();
  FOPO_CHECK(!trajectory.steps.empty());
  FOPO_CHECK(IsTerminal(trajectory.outcome));
  for (int role = 0; role < 2; ++role) {
    std::vector<int> own;
    for (size_t i = 0; i < trajectory.steps.size(); ++i) {
      if (static_cast<int>(trajectory.steps[i].role) == role) {
        own.push_back(static_cast<int>(i));
      }
    }
    if (own.empty()) continue;
    double value = trajectory.terminal_reward[role];
    for (size_t k = own.size(); k > 0; --k) {
      trajectory.steps[own[k - 1]].reward = value;
      value *= config.delta;
    }
  }
}

}  // namespace fopo
