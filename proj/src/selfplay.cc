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

#include "fopo/selfplay.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>
#include <utility>

#include "fopo/check.h"
#include "fopo/rng.h"

namespace fopo {

namespace {

std::string Fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

ModelShape WithHidden(ModelShape base, bool hidden, int hidden_dim) {
  base.hidden = hidden;
  base.hidden_dim = hidden ? hidden_dim : 0;
  if (hidden) FOPO_CHECK_GE(hidden_dim, 1);
  return base;
}

EpisodeRecord RolloutEpisode(Environment& env, const ModelShape& shape,
                             const std::vector<double>& theta, uint64_t seed) {
  env.Reset();
  Rng rng(seed);
  EpisodeRecord rec;
  rec.traj.instance_id = env.InstanceId();
  rec.traj.seed = seed;
  while (!env.IsTerminal()) {
    StepRecord step;
    step.role = env.CurrentRole();
    step.ctx = env.MakeRoleContext();
    step.features = env.MakeStateFeatures();
    const std::vector<double> dist =
        ActionDistribution(shape, theta, step.ctx, step.features);
    step.action = rng.SampleIndex(dist);
    step.behavior_log_prob = std::log(dist[step.action]);
    rec.entropy_sum += Entropy(dist);
    rec.traj.steps.push_back(std::move(step));
    env.Step(rec.traj.steps.back().action);
  }
  rec.traj.outcome = env.outcome();
  rec.traj.total_turns = env.turn_index();
  return rec;
}

std::vector<PretrainSample> CollectOracleSamples(Environment& env) {
  env.Reset();
  std::vector<PretrainSample> samples;
  while (!env.IsTerminal()) {
    PretrainSample s;
    s.ctx = env.MakeRoleContext();
    s.features = env.MakeStateFeatures();
    s.target_action = env.OracleAction();
    const int action = s.target_action;
    samples.push_back(std::move(s));
    env.Step(action);
  }
  return samples;
}

std::vector<PairedStep> PairTrajectorySteps(
    const std::vector<Trajectory>& trajectories) {
  std::vector<PairedStep> out;
  auto to_sample = [](const StepRecord& r) {
    StepSample s;
    s.ctx = r.ctx;
    s.features = r.features;
    s.action = r.action;
    s.behavior_log_prob = r.behavior_log_prob;
    s.advantage = r.reward;
    return s;
  };
  for (const Trajectory& traj : trajectories) {
    const int n = static_cast<int>(traj.steps.size());
    for (int t = 0; t < n; ++t) {
      PairedStep p;
      p.self = to_sample(traj.steps[t]);
      if (t + 1 < n) p.counterpart = to_sample(traj.steps[t + 1]);
      out.push_back(std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pretraining.

PretrainReport Pretrain(const ModelShape& shape, std::vector<double>& theta,
                        const std::vector<PretrainSample>& data,
                        const PretrainConfig& config) {
  FOPO_CHECK(!data.empty());
  FOPO_CHECK_GE(config.epochs, 1);
  FOPO_CHECK_GE(config.batch_size, 1);
  FOPO_CHECK_EQ(static_cast<int>(theta.size()), ParamCount(shape));
  const std::vector<double> theta_init = theta;
  Rng rng(DeriveSeed(config.seed, 0x70726574, 0, 0));  // pretrain stream
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      std::vector<PretrainSample> batch;
      batch.reserve(end - start);
      for (size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      const std::vector<double> grad =
          PretrainGradient(shape, batch, theta, theta_init, config.beta);
      FOPO_CHECK(ApplyUpdate(theta, grad, config.alpha, config.grad_norm_cap));
    }
  }
  PretrainReport report;
  report.num_samples = static_cast<int>(data.size());
  for (const PretrainSample& s : data) {
    report.mean_log_prob +=
        LogProb(shape, theta, s.ctx, s.features, s.target_action);
    if (GreedyAction(shape, theta, s.ctx, s.features) == s.target_action) {
      report.accuracy += 1.0;
    }
  }
  report.mean_log_prob /= report.num_samples;
  report.accuracy /= report.num_samples;
  return report;
}

// ---------------------------------------------------------------------------
// Training.

std::string PhaseMetrics::ToLine() const {
  std::string line = "phase=" + std::to_string(phase);
  line += " episodes=" + std::to_string(episodes);
  line += " steps=" + std::to_string(steps);
  line += " reward1=" + Fmt6(mean_reward1);
  line += " reward2=" + Fmt6(mean_reward2);
  line += " turns=" + Fmt6(mean_turns);
  line += " succ=" + Fmt6(outcome_fraction[static_cast<int>(Outcome::kRsaSuccess)]);
  line += " fail=" + Fmt6(outcome_fraction[static_cast<int>(Outcome::kRsaFailure)]);
  line += " attw=" + Fmt6(outcome_fraction[static_cast<int>(Outcome::kAttackerWin)]);
  line += " defw=" + Fmt6(outcome_fraction[static_cast<int>(Outcome::kDefenderWin)]);
  line += " tie=" + Fmt6(outcome_fraction[static_cast<int>(Outcome::kTie)]);
  line += " entropy=" + Fmt6(mean_entropy);
  line += " grad_norm=" + Fmt6(grad_norm);
  line += " kl=" + Fmt6(update_kl);
  line += std::string(" collapsed=") + (collapsed ? "1" : "0");
  return line;
}

namespace {

std::string CheckpointPath(const std::string& dir, int phase) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ckpt_%06d.bin", phase);
  return dir + "/" + buf;
}

}  // namespace

TrainResult Train(const EnvFactory& factory, int num_instances,
                  const ModelShape& shape, std::vector<double> theta,
                  const TrainConfig& config) {
  config.update.Validate();
  config.reward.Validate();
  FOPO_CHECK_GE(num_instances, 1);
  FOPO_CHECK_GE(config.phases, 1);
  FOPO_CHECK_GE(config.episodes_per_phase, 1);
  FOPO_CHECK_GE(config.optimizer_epochs, 1);
  FOPO_CHECK_GE(config.workers, 1);
  FOPO_CHECK_GE(config.keep_last, 1);
  FOPO_CHECK_GE(config.checkpoint_every, 1);
  FOPO_CHECK_EQ(static_cast<int>(theta.size()), ParamCount(shape));
  const bool group_rel = IsGroupRelative(config.update.algorithm);
  const int group_size = config.update.group_size;
  if (group_rel) {
    FOPO_CHECK_EQ(config.episodes_per_phase % group_size, 0);
  }

  const std::unique_ptr<Environment> probe = factory(0);
  FOPO_CHECK(probe != nullptr);
  FOPO_CHECK_EQ(probe->Shape().input_dim, shape.input_dim);
  FOPO_CHECK_EQ(probe->Shape().max_actions, shape.max_actions);
  const uint32_t game_id = probe->GameId();
  const uint32_t feature_map_id = probe->FeatureMapId();

  std::ofstream metrics_out;
  std::string ckpt_dir;
  const bool to_files = !config.out_dir.empty();
  if (to_files) {
    ckpt_dir = config.out_dir + "/checkpoints";
    std::filesystem::create_directories(ckpt_dir);
    metrics_out.open(config.out_dir + "/metrics.txt", std::ios::trunc);
    FOPO_CHECK(metrics_out.good());
  }
  auto make_checkpoint = [&](int phase) {
    Checkpoint c;
    c.game_id = game_id;
    c.feature_map_id = feature_map_id;
    c.shape = shape;
    c.phase = static_cast<uint64_t>(phase);
    c.rng_state = config.seed;  // reproduction key: seeds derive from this
    c.theta = theta;
    return c;
  };

  TrainResult result;
  std::deque<std::pair<int, std::string>> ring;  // (phase, path) of kept files
  long long episode_counter = 0;
  long long group_counter = 0;
  const int num_episodes = config.episodes_per_phase;

  for (int phase = 1; phase <= config.phases; ++phase) {
    const std::vector<double> theta_old = theta;  // frozen collection params

    std::vector<int> instance_of(num_episodes);
    if (group_rel) {
      for (int e = 0; e < num_episodes; ++e) {
        instance_of[e] = static_cast<int>(
            (group_counter + e / group_size) % num_instances);
      }
      group_counter += num_episodes / group_size;
    } else {
      for (int e = 0; e < num_episodes; ++e) {
        instance_of[e] =
            static_cast<int>((episode_counter + e) % num_instances);
      }
    }
    episode_counter += num_episodes;

    std::vector<EpisodeRecord> records(num_episodes);
    auto run_episode = [&](int e) {
      const std::unique_ptr<Environment> env = factory(instance_of[e]);
      const uint64_t seed =
          DeriveSeed(config.seed, static_cast<uint64_t>(phase),
                     static_cast<uint64_t>(e), 0x11);
      records[e] = RolloutEpisode(*env, shape, theta_old, seed);
      env->AssignRewards(records[e].traj, config.reward,
                         config.reward_rounds_unit);
    };
    const int workers = std::min(config.workers, num_episodes);
    if (workers <= 1) {
      for (int e = 0; e < num_episodes; ++e) run_episode(e);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (int e = w; e < num_episodes; e += workers) run_episode(e);
        });
      }
      for (std::thread& t : pool) t.join();
    }

    PhaseMetrics m;
    m.phase = phase;
    m.episodes = num_episodes;
    double entropy_sum = 0.0;
    for (const EpisodeRecord& r : records) {
      m.steps += static_cast<int>(r.traj.steps.size());
      m.mean_reward1 += r.traj.terminal_reward[0];
      m.mean_reward2 += r.traj.terminal_reward[1];
      m.mean_turns += r.traj.total_turns;
      m.outcome_fraction[static_cast<int>(r.traj.outcome)] += 1.0;
      entropy_sum += r.entropy_sum;
    }
    m.mean_reward1 /= num_episodes;
    m.mean_reward2 /= num_episodes;
    m.mean_turns /= num_episodes;
    for (double& f : m.outcome_fraction) f /= num_episodes;
    m.mean_entropy = m.steps > 0 ? entropy_sum / m.steps : 0.0;

    std::vector<Trajectory> trajs;
    trajs.reserve(num_episodes);
    for (EpisodeRecord& r : records) trajs.push_back(std::move(r.traj));

    if (group_rel) {
      // Standardize terminal rewards within each (instance, role) group and
      // write the resulting advantage onto every step of that role. No decay
      // on this path.
      for (int g = 0; g < num_episodes / group_size; ++g) {
        for (int role = 0; role < 2; ++role) {
          std::vector<double> rewards(group_size);
          for (int k = 0; k < group_size; ++k) {
            rewards[k] = trajs[g * group_size + k].terminal_reward[role];
          }
          const std::vector<double> adv =
              AdvantageGroupRelative(rewards, config.update.group_norm);
          for (int k = 0; k < group_size; ++k) {
            for (StepRecord& s : trajs[g * group_size + k].steps) {
              if (static_cast<int>(s.role) == role) s.reward = adv[k];
            }
          }
        }
      }
    } else {
      for (Trajectory& t : trajs) PropagateDecay(t, config.reward);
    }

    const std::vector<PairedStep> batch = PairTrajectorySteps(trajs);
    FOPO_CHECK(!batch.empty());
    for (int epoch = 0; epoch < config.optimizer_epochs; ++epoch) {
      const std::vector<double> grad =
          AlgorithmGradient(shape, batch, theta, theta_old, config.update);
      if (epoch == 0) m.grad_norm = VectorNorm(grad);
      if (!ApplyUpdate(theta, grad, config.update.alpha,
                       config.update.grad_norm_cap)) {
        if (to_files) {
          SaveCheckpoint(make_checkpoint(phase),
                         config.out_dir + "/diagnostic_ckpt.bin");
        }
        FatalError("Non-finite gradient at phase " + std::to_string(phase) +
                   "; diagnostic checkpoint written");
      }
    }

    std::vector<StateRef> states;
    states.reserve(batch.size());
    for (const PairedStep& p : batch) {
      states.push_back(StateRef{&p.self.ctx, &p.self.features});
    }
    m.update_kl = KlAndGradient(shape, theta, theta_old, states).kl;
    m.collapsed = m.mean_entropy < config.entropy_floor;
    if (m.collapsed) result.collapsed = true;

    if (to_files) {
      metrics_out << m.ToLine() << "\n";
      metrics_out.flush();
      const std::string path = CheckpointPath(ckpt_dir, phase);
      SaveCheckpoint(make_checkpoint(phase), path);
      ring.emplace_back(phase, path);
      while (static_cast<int>(ring.size()) > config.keep_last) {
        const auto [old_phase, old_path] = ring.front();
        ring.pop_front();
        if (old_phase % config.checkpoint_every != 0) {
          std::filesystem::remove(old_path);
        }
      }
    }
    if (config.verbose) std::cerr << m.ToLine() << "\n";
    result.history.push_back(m);
    result.phases_run = phase;
    if (m.collapsed && config.halt_on_collapse) break;
  }

  result.theta = std::move(theta);
  return result;
}

}  // namespace fopo
