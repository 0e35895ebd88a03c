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
// In-domain evaluation: fixed-instance pairings between policies, scripted
// oracles, and uniform-random players, with greedy (argmax) decoding for
// policies so measurement is separated from exploration. Cross-play
// tournaments evaluate every ordered role pairing and serialize a CSV
// matrix. Evaluation never mutates parameters.

#ifndef FOPO_EVALHARNESS_H_
#define FOPO_EVALHARNESS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fopo/rewards.h"
#include "fopo/selfplay.h"
#include "fopo/trajectory.h"

namespace fopo {

enum class PlayerKind { kPolicy, kOracle, kRandom };

// One seat in a pairing. Policy players borrow their parameters; the caller
// keeps them alive for the duration of the evaluation.
struct Player {
  PlayerKind kind = PlayerKind::kOracle;
  const std::vector<double>* theta = nullptr;  // kPolicy only
  ModelShape shape;                            // kPolicy only
  std::string label;
};

Player MakeOraclePlayer(std::string label = "oracle");
Player MakeRandomPlayer(std::string label = "random");
Player MakePolicyPlayer(const std::vector<double>& theta,
                        const ModelShape& shape, std::string label);

struct EvalConfig {
  int episodes = 1000;  // per pairing
  uint64_t seed = 1;
  double entropy_floor = 0.01;  // nats
  bool reward_rounds_unit = false;
  RewardConfig reward;
  int workers = 1;  // tournament pairing-level parallelism
};

// One pairing's report. Reference-game fields: shared efficiency reward
// scaled by 100, identification success rate, and the mean gap between the
// episode's speaker rounds and the oracle-minimal count. Word-game fields:
// outcome rates per role (win + loss + tie = 1 by construction). Half-widths
// are 95% normal approximations and reported, never asserted.
struct EvalReport {
  std::string role1_label;
  std::string role2_label;
  int episodes = 0;

  double mean_reward_x100 = 0.0;
  double reward_half_width = 0.0;
  double success_rate = 0.0;
  double success_half_width = 0.0;
  double mean_round_gap = 0.0;

  double attacker_win_rate = 0.0;
  double defender_win_rate = 0.0;
  double tie_rate = 0.0;
  double win_half_width = 0.0;

  // Mean policy entropy over states where a policy player acted; zero when
  // neither seat is a policy.
  double mean_entropy = 0.0;
  bool entropy_collapsed = false;
};

// Plays `config.episodes` greedy episodes, cycling instances round-robin,
// with player 1 in the first seat (speaker/attacker) and player 2 in the
// second. Deterministic in (players, instances, config).
EvalReport EvaluatePairing(const EnvFactory& factory, int num_instances,
                           const Player& role1, const Player& role2,
                           const EvalConfig& config);

struct TournamentResult {
  std::vector<std::string> labels;
  // All ordered pairings, row-major: entry i*n+j pairs players[i] in the
  // first role with players[j] in the second.
  std::vector<EvalReport> reports;

  std::string ToCsv() const;
};

// Every ordered role pairing (including self-pairings), each with its own
// derived seed; pairings run across `config.workers` threads into indexed
// slots, so the result is worker-count independent.
TournamentResult Tournament(const EnvFactory& factory, int num_instances,
                            const std::vector<Player>& players,
                            const EvalConfig& config);

// Mean of `metric` over pairings where at least one seat's label contains
// `label`, versus pairings where neither does.
struct LabelAggregate {
  double include_mean = 0.0;
  double exclude_mean = 0.0;
  int include_count = 0;
  int exclude_count = 0;
};
LabelAggregate AggregateByLabel(
    const TournamentResult& result, const std::string& label,
    const std::function<double(const EvalReport&)>& metric);

struct EntropyDiagnostics {
  double mean_entropy = 0.0;
  bool collapsed = false;  // mean entropy below the floor

  int num_states = 0;
};

// Mean categorical policy entropy over the given states, flagging collapse
// below `entropy_floor` nats.
EntropyDiagnostics EntropyOverStates(const ModelShape& shape,
                                     const std::vector<double>& theta,
                                     const std::vector<StateRef>& states,
                                     double entropy_floor);

}  // namespace fopo

#endif  // FOPO_EVALHARNESS_H_
