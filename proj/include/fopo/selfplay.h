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
// Offline self-play training loop. Each phase freezes the collection
// parameters, rolls out a batch of episodes (optionally across worker
// threads, bit-reproducibly: every episode's RNG stream is derived from the
// master seed and the episode's index, and results land in indexed slots),
// scores them, and applies exactly one policy-gradient step over everything
// collected. Also hosts maximum-likelihood pretraining on scripted play.

#ifndef FOPO_SELFPLAY_H_
#define FOPO_SELFPLAY_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fopo/optim.h"
#include "fopo/rewards.h"
#include "fopo/trajectory.h"

namespace fopo {

// Environment base shape plus the run's hidden-layer settings.
ModelShape WithHidden(ModelShape base, bool hidden, int hidden_dim);

struct EpisodeRecord {
  Trajectory traj;
  double entropy_sum = 0.0;  // policy entropy summed over visited states
};

// One sampled self-play episode from the environment's initial state, with
// per-step behavior log-probs recorded. Terminal rewards are not assigned
// here.
EpisodeRecord RolloutEpisode(Environment& env, const ModelShape& shape,
                             const std::vector<double>& theta, uint64_t seed);

// Scripted reference play to termination; returns one maximum-likelihood
// sample per step (both roles).
std::vector<PretrainSample> CollectOracleSamples(Environment& env);

// Builds the optimizer batch from scored trajectories: every step appears
// once as a self step, paired with the immediately following counterpart
// step when one exists. Step advantages must already be in
// StepRecord::reward.
std::vector<PairedStep> PairTrajectorySteps(
    const std::vector<Trajectory>& trajectories);

// ---------------------------------------------------------------------------
// Pretraining.

struct PretrainConfig {
  double alpha = 5e-5;
  double beta = 0.01;     // KL leash toward the initial parameters
  int epochs = 30;
  int batch_size = 32;
  uint64_t seed = 1;
  double grad_norm_cap = 10.0;
};

struct PretrainReport {
  double mean_log_prob = 0.0;  // dataset mean log-likelihood, final params
  double accuracy = 0.0;       // greedy-action match rate, final params
  int num_samples = 0;
};

// Minibatched ascent on mean log-likelihood with a KL leash toward the
// entry-time parameters. Shuffles each epoch from `config.seed`.
PretrainReport Pretrain(const ModelShape& shape, std::vector<double>& theta,
                        const std::vector<PretrainSample>& data,
                        const PretrainConfig& config);

// ---------------------------------------------------------------------------
// Training.

// Creates a fresh environment for instance `index` (0 <= index <
// num_instances). Must be callable concurrently from worker threads.
using EnvFactory = std::function<std::unique_ptr<Environment>(int index)>;

struct TrainConfig {
  UpdateConfig update;
  RewardConfig reward;
  bool reward_rounds_unit = false;
  int phases = 200;
  int episodes_per_phase = 256;
  int optimizer_epochs = 1;  // gradient steps per collected phase batch
  int workers = 1;
  uint64_t seed = 1;
  std::string out_dir;  // metrics/checkpoint root; empty disables file output
  int checkpoint_every = 10;  // phases whose checkpoints are kept forever
  int keep_last = 5;          // rolling window of most recent checkpoints
  double entropy_floor = 0.01;  // nats; below this the phase is flagged
  bool halt_on_collapse = false;
  bool verbose = false;  // phase lines to stderr as well
};

struct PhaseMetrics {
  int phase = 0;
  int episodes = 0;
  int steps = 0;
  double mean_reward1 = 0.0;
  double mean_reward2 = 0.0;
  double mean_turns = 0.0;
  // Episode outcome fractions, indexed by Outcome.
  std::array<double, 6> outcome_fraction = {};
  double mean_entropy = 0.0;
  double grad_norm = 0.0;    // pre-cap gradient norm
  double update_kl = 0.0;    // KL(new || collection params) on visited states
  bool collapsed = false;

  std::string ToLine() const;
};

struct TrainResult {
  std::vector<double> theta;
  std::vector<PhaseMetrics> history;
  int phases_run = 0;
  bool collapsed = false;  // any phase tripped the entropy floor
};

// Runs `config.phases` offline phases starting from `theta`. Instances cycle
// round-robin; group-relative algorithms roll out `update.group_size`
// episodes per instance and standardize terminal rewards within each
// (instance, role) group, while the plain algorithms decay-propagate
// terminal rewards along each agent's own steps. The result is independent
// of `workers`.
TrainResult Train(const EnvFactory& factory, int num_instances,
                  const ModelShape& shape, std::vector<double> theta,
                  const TrainConfig& config);

}  // namespace fopo

#endif  // FOPO_SELFPLAY_H_
