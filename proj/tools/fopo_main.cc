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
// Command-line front end: gen-data, pretrain, train, sweep, eval,
// tournament. Settings resolve as defaults < --config file < --set pairs <
// named flags; every command writes a manifest from which it can be re-run
// exactly. Diagnostics go to stderr, data to files under --out.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fopo/check.h"
#include "fopo/config.h"
#include "fopo/datagen.h"
#include "fopo/evalharness.h"
#include "fopo/optim.h"
#include "fopo/policy.h"
#include "fopo/rng.h"
#include "fopo/rsa_env.h"
#include "fopo/selfplay.h"
#include "fopo/taboo_env.h"
#include "fopo/trajectory.h"

namespace fopo {
namespace {

constexpr double kInitScale = 0.01;  // parameter init, scale * N(0,1)

// Flag state shared by all subcommands; named flags land in `overrides` so
// the precedence defaults < file < --set < named flags is explicit.
struct SettingsCli {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> overrides;
};

void AddSettingsFlags(CLI::App* cmd, SettingsCli& cli) {
  cmd->add_option("--config", cli.config_path,
                  "Key=value settings file (flags override it)");
  cmd->add_option("--set", cli.sets,
                  "Extra key=value override; repeatable");
  // Named conveniences for common settings; anything else goes via --set.
  static const std::vector<std::pair<std::string, std::string>> kNamed = {
      {"--game", "game"},
      {"--algo", "algo"},
      {"--seed", "seed"},
      {"--out", "out_dir"},
      {"--workers", "workers"},
      {"--alpha", "alpha"},
      {"--beta", "beta"},
      {"--eta", "eta"},
      {"--clip-epsilon", "clip_epsilon"},
      {"--group-size", "group_size"},
      {"--phases", "phases"},
      {"--episodes", "episodes_per_phase"},
      {"--pretrain-epochs", "pretrain_epochs"},
      {"--pretrain-count", "pretrain_count"},
      {"--rl-count", "rl_count"},
      {"--eval-episodes", "eval_episodes"},
      {"--instances", "instances"},
      {"--chains", "chains"},
      {"--init-checkpoint", "init_checkpoint"},
      {"--checkpoint", "checkpoint"},
      {"--checkpoint-dir", "checkpoint_dir"},
      {"--hidden", "hidden"},
      {"--hidden-dim", "hidden_dim"},
  };
  for (const auto& [flag, key] : kNamed) {
    const std::string k = key;
    cmd->add_option_function<std::string>(
        flag,
        [&cli, k](const std::string& value) { cli.overrides[k] = value; },
        "Sets " + k);
  }
}

RunSettings Resolve(const SettingsCli& cli) {
  KeyValueConfig kv;
  if (!cli.config_path.empty()) kv = KeyValueConfig::Load(cli.config_path);
  for (const std::string& s : cli.sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      FatalError("--set expects key=value, got '" + s + "'");
    }
    kv.Set(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [key, value] : cli.overrides) kv.Set(key, value);
  return RunSettings::FromKeyValue(kv);
}

void WriteManifest(const RunSettings& settings, const std::string& command) {
  std::filesystem::create_directories(settings.out_dir);
  KeyValueConfig kv = settings.ToKeyValue();
  kv.Set("command", command);
  kv.Save(settings.out_dir + "/manifest.txt");
}

UpdateConfig MakeUpdateConfig(const RunSettings& s) {
  UpdateConfig u;
  u.alpha = s.alpha;
  u.beta = s.beta;
  u.eta = s.eta;
  u.clip_epsilon = s.clip_epsilon;
  u.algorithm = ParseAlgorithm(s.algo);
  u.group_size = s.group_size;
  u.batch_size = s.batch_size;
  u.grad_norm_cap = s.grad_norm_cap;
  if (s.group_norm == "std") {
    u.group_norm = GroupNormMode::kStd;
  } else if (s.group_norm == "no_std") {
    u.group_norm = GroupNormMode::kNoStd;
  } else {
    FatalError("group_norm must be std or no_std, got '" + s.group_norm + "'");
  }
  if (s.foresight_direction == "counterpart") {
    u.foresight_direction = ForesightDirection::kCounterpart;
  } else if (s.foresight_direction == "self") {
    u.foresight_direction = ForesightDirection::kSelf;
  } else {
    FatalError("foresight_direction must be counterpart or self, got '" +
               s.foresight_direction + "'");
  }
  return u;
}

RewardConfig MakeRewardConfig(const RunSettings& s) {
  RewardConfig r;
  r.gamma = s.reward_gamma;
  r.epsilon = s.reward_epsilon;
  r.delta = s.decay_delta;
  return r;
}

bool RoundsUnit(const RunSettings& s) {
  if (s.reward_turn_unit == "turns") return false;
  if (s.reward_turn_unit == "rounds") return true;
  FatalError("reward_turn_unit must be turns or rounds, got '" +
             s.reward_turn_unit + "'");
}

RsaEnvConfig MakeRsaEnvConfig(const RunSettings& s) {
  RsaEnvConfig c;
  c.max_dims = s.max_features;
  c.max_objects = s.max_objects;
  return c;
}

TabooEnvConfig MakeTabooEnvConfig(const RunSettings& s) {
  TabooEnvConfig c;
  c.num_words = s.taboo_words;
  c.num_cues = s.taboo_cues;
  c.max_turns = s.taboo_max_turns;
  c.top_k = s.taboo_top_k;
  c.guess_threshold = s.taboo_guess_threshold;
  return c;
}

DatagenConfig MakeDatagenConfig(const RunSettings& s) {
  DatagenConfig c;
  c.min_features = s.min_features;
  c.max_features = s.max_features;
  c.min_objects = s.min_objects;
  c.max_objects = s.max_objects;
  return c;
}

// Instance pool + factory for the configured game. The pool is owned by the
// returned struct; the factory copies instances into fresh environments, so
// it is safe to call from worker threads.
struct GamePool {
  std::vector<GeneratedInstance> rsa_instances;
  std::vector<TabooWorld> taboo_worlds;
  RsaEnvConfig rsa_config;
  TabooEnvConfig taboo_config;
  bool is_rsa = true;

  int size() const {
    return is_rsa ? static_cast<int>(rsa_instances.size())
                  : static_cast<int>(taboo_worlds.size());
  }
  EnvFactory Factory() const {
    if (is_rsa) {
      return [this](int i) -> std::unique_ptr<Environment> {
        return std::make_unique<RsaEnv>(rsa_config, rsa_instances[i].objects,
                                        rsa_instances[i].id);
      };
    }
    return [this](int i) -> std::unique_ptr<Environment> {
      return std::make_unique<TabooEnv>(taboo_config, taboo_worlds[i],
                                        "world" + std::to_string(i));
    };
  }
  ModelShape BaseShape(const RunSettings& s) const {
    return is_rsa ? rsa_config.Shape(s.hidden, s.hidden_dim)
                  : taboo_config.Shape(s.hidden, s.hidden_dim);
  }
  uint32_t game_id() const { return is_rsa ? kGameIdRsa : kGameIdTaboo; }
  uint32_t feature_map_id() const {
    return is_rsa ? kRsaFeatureMapId : kTabooFeatureMapId;
  }
};

// Loads the pool a command should run on. For the reference game this is the
// instance corpus at `instances_path`; the word game generates its worlds
// from the seed (stream `world_stream`).
GamePool LoadPool(const RunSettings& s, const std::string& instances_path,
                  int taboo_count, uint64_t world_stream) {
  GamePool pool;
  pool.rsa_config = MakeRsaEnvConfig(s);
  pool.taboo_config = MakeTabooEnvConfig(s);
  if (s.game == "rsa") {
    pool.is_rsa = true;
    if (instances_path.empty()) {
      FatalError("--instances is required for --game rsa (run gen-data first)");
    }
    pool.rsa_instances = LoadCorpus(instances_path);
  } else if (s.game == "taboo") {
    pool.is_rsa = false;
    pool.taboo_worlds = GenerateTabooWorlds(
        DeriveSeed(s.seed, 0, 0, world_stream), taboo_count,
        pool.taboo_config);
  } else {
    FatalError("game must be rsa or taboo, got '" + s.game + "'");
  }
  return pool;
}

Checkpoint LoadCheckpointForPool(const std::string& path, const GamePool& pool,
                                 const ModelShape& shape) {
  Checkpoint ckpt = LoadCheckpoint(path);
  FOPO_CHECK_EQ(ckpt.game_id, pool.game_id());
  FOPO_CHECK_EQ(ckpt.feature_map_id, pool.feature_map_id());
  FOPO_CHECK(ckpt.shape == shape);
  return ckpt;
}

// ---------------------------------------------------------------------------
// Subcommands.

int CmdGenData(const RunSettings& s) {
  if (s.game != "rsa") {
    std::cerr << "gen-data: only --game rsa emits corpora; word-game worlds "
                 "are generated on demand from the seed\n";
    return 2;
  }
  WriteManifest(s, "gen-data");
  const DatagenConfig dg = MakeDatagenConfig(s);
  const FeaturePairBanks banks =
      BuildFeatureBanks(s.seed, s.pretrain_pairs, s.rl_pairs);
  const std::vector<GeneratedInstance> pretrain = GenerateInstances(
      DeriveSeed(s.seed, 0, 0, 1), s.pretrain_count, dg, banks.pretrain,
      "pre");
  const std::vector<GeneratedInstance> rl = GenerateInstances(
      DeriveSeed(s.seed, 0, 0, 2), s.rl_count, dg, banks.rl, "rl");
  EmitCorpus(pretrain, s.out_dir + "/instances_pretrain.txt",
             s.out_dir + "/chains_pretrain.txt");
  EmitCorpus(rl, s.out_dir + "/instances_rl.txt",
             s.out_dir + "/chains_rl.txt");
  std::cerr << "gen-data: wrote " << pretrain.size() << " pretrain + "
            << rl.size() << " rl instances to " << s.out_dir << "\n";
  return 0;
}

int CmdPretrain(const RunSettings& s) {
  WriteManifest(s, "pretrain");
  const GamePool pool = LoadPool(s, s.instances, s.pretrain_count, 3);
  const ModelShape shape = pool.BaseShape(s);
  const EnvFactory factory = pool.Factory();

  std::vector<PretrainSample> samples;
  for (int i = 0; i < pool.size(); ++i) {
    const std::unique_ptr<Environment> env = factory(i);
    std::vector<PretrainSample> one = CollectOracleSamples(*env);
    samples.insert(samples.end(), std::make_move_iterator(one.begin()),
                   std::make_move_iterator(one.end()));
  }
  Rng rng(DeriveSeed(s.seed, 0, 0, 0xb00));
  std::vector<double> theta = InitParameters(shape, kInitScale, rng);
  PretrainConfig pc;
  pc.alpha = s.pretrain_alpha;
  pc.beta = s.pretrain_beta;
  pc.epochs = s.pretrain_epochs;
  pc.batch_size = s.pretrain_batch;
  pc.seed = s.seed;
  pc.grad_norm_cap = s.grad_norm_cap;
  const PretrainReport report = Pretrain(shape, theta, samples, pc);

  Checkpoint ckpt;
  ckpt.game_id = pool.game_id();
  ckpt.feature_map_id = pool.feature_map_id();
  ckpt.shape = shape;
  ckpt.phase = 0;
  ckpt.rng_state = s.seed;
  ckpt.theta = std::move(theta);
  SaveCheckpoint(ckpt, s.out_dir + "/pretrained.bin");

  KeyValueConfig out;
  out.Set("samples", std::to_string(report.num_samples));
  out.Set("mean_log_prob", FormatDouble(report.mean_log_prob));
  out.Set("accuracy", FormatDouble(report.accuracy));
  out.Save(s.out_dir + "/pretrain_report.txt");
  std::cerr << "pretrain: " << report.num_samples << " samples, mean log p "
            << report.mean_log_prob << ", greedy accuracy " << report.accuracy
            << "\n";
  return 0;
}

int CmdTrain(const RunSettings& s) {
  WriteManifest(s, "train");
  const GamePool pool = LoadPool(s, s.instances, s.rl_count, 4);
  const ModelShape shape = pool.BaseShape(s);

  std::vector<double> theta;
  if (!s.init_checkpoint.empty()) {
    theta = LoadCheckpointForPool(s.init_checkpoint, pool, shape).theta;
  } else {
    Rng rng(DeriveSeed(s.seed, 0, 0, 0xb00));
    theta = InitParameters(shape, kInitScale, rng);
  }

  TrainConfig tc;
  tc.update = MakeUpdateConfig(s);
  tc.reward = MakeRewardConfig(s);
  tc.reward_rounds_unit = RoundsUnit(s);
  tc.phases = s.phases;
  tc.episodes_per_phase = s.episodes_per_phase;
  tc.optimizer_epochs = s.epochs;
  tc.workers = s.workers;
  tc.seed = s.seed;
  tc.out_dir = s.out_dir;
  tc.checkpoint_every = s.checkpoint_every;
  tc.keep_last = s.keep_last;
  tc.entropy_floor = s.entropy_floor;
  tc.halt_on_collapse = s.halt_on_collapse;
  tc.verbose = true;

  const TrainResult result =
      Train(pool.Factory(), pool.size(), shape, std::move(theta), tc);

  Checkpoint final_ckpt;
  final_ckpt.game_id = pool.game_id();
  final_ckpt.feature_map_id = pool.feature_map_id();
  final_ckpt.shape = shape;
  final_ckpt.phase = static_cast<uint64_t>(result.phases_run);
  final_ckpt.rng_state = s.seed;
  final_ckpt.theta = result.theta;
  SaveCheckpoint(final_ckpt, s.out_dir + "/final.bin");
  std::cerr << "train: " << result.phases_run << " phases, final checkpoint "
            << s.out_dir << "/final.bin"
            << (result.collapsed ? " (entropy collapse flagged)" : "") << "\n";
  return 0;
}

int CmdSweep(const RunSettings& base, const std::string& param,
             const std::string& values_csv) {
  if (param.empty() || values_csv.empty()) {
    std::cerr << "sweep: --param and --values are required\n";
    return 2;
  }
  const std::vector<std::string> values = SplitString(values_csv, ',');
  for (const std::string& value : values) {
    KeyValueConfig kv = base.ToKeyValue();
    kv.Set(param, value);
    kv.Set("out_dir", base.out_dir + "/" + param + "_" + value);
    const RunSettings s = RunSettings::FromKeyValue(kv);
    std::cerr << "sweep: " << param << "=" << value << " -> " << s.out_dir
              << "\n";
    const int rc = CmdTrain(s);
    if (rc != 0) return rc;
  }
  return 0;
}

Player MakeSeat(const std::string& spec, const GamePool& pool,
                const ModelShape& shape, std::vector<Checkpoint>& owned,
                const std::string& label) {
  if (spec == "oracle") return MakeOraclePlayer("oracle");
  if (spec == "random") return MakeRandomPlayer("random");
  owned.push_back(LoadCheckpointForPool(spec, pool, shape));
  return MakePolicyPlayer(owned.back().theta, shape, label);
}

int CmdEval(const RunSettings& s, const std::string& opponent_spec) {
  if (s.checkpoint.empty()) {
    std::cerr << "eval: --checkpoint is required\n";
    return 2;
  }
  WriteManifest(s, "eval");
  const GamePool pool = LoadPool(s, s.instances, s.rl_count, 5);
  const ModelShape shape = pool.BaseShape(s);
  std::vector<Checkpoint> owned;
  owned.reserve(2);
  const Player policy = MakeSeat(s.checkpoint, pool, shape, owned, "policy");
  const Player opponent = MakeSeat(
      opponent_spec == "self" ? s.checkpoint : opponent_spec, pool, shape,
      owned, opponent_spec == "self" ? "policy" : "opponent");

  EvalConfig ec;
  ec.episodes = s.eval_episodes;
  ec.seed = s.seed;
  ec.entropy_floor = s.entropy_floor;
  ec.reward_rounds_unit = RoundsUnit(s);
  ec.reward = MakeRewardConfig(s);
  ec.workers = s.workers;

  TournamentResult result;
  result.labels = {policy.label, opponent.label};
  ec.seed = DeriveSeed(s.seed, 0, 1, 0x70);
  result.reports.push_back(
      EvaluatePairing(pool.Factory(), pool.size(), policy, opponent, ec));
  ec.seed = DeriveSeed(s.seed, 1, 0, 0x70);
  result.reports.push_back(
      EvaluatePairing(pool.Factory(), pool.size(), opponent, policy, ec));
  WriteFileOrDie(s.out_dir + "/eval_report.csv", result.ToCsv());

  const EvalReport& as1 = result.reports[0];
  const EvalReport& as2 = result.reports[1];
  if (pool.is_rsa) {
    std::cout << "reward_x100_as_speaker=" << as1.mean_reward_x100
              << " reward_x100_as_listener=" << as2.mean_reward_x100
              << " success_as_speaker=" << as1.success_rate
              << " success_as_listener=" << as2.success_rate << "\n";
  } else {
    std::cout << "win_as_attacker=" << as1.attacker_win_rate
              << " win_as_defender=" << as2.defender_win_rate
              << " tie_as_attacker=" << as1.tie_rate << "\n";
  }
  return 0;
}

int CmdTournament(const RunSettings& s, bool include_oracle,
                  bool include_random, const std::string& aggregate_label) {
  if (s.checkpoint_dir.empty()) {
    std::cerr << "tournament: --checkpoint-dir is required\n";
    return 2;
  }
  WriteManifest(s, "tournament");
  const GamePool pool = LoadPool(s, s.instances, s.rl_count, 5);
  const ModelShape shape = pool.BaseShape(s);

  std::vector<std::string> paths;
  for (const auto& entry :
       std::filesystem::directory_iterator(s.checkpoint_dir)) {
    if (entry.path().extension() == ".bin") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    std::cerr << "tournament: no .bin checkpoints in " << s.checkpoint_dir
              << "\n";
    return 2;
  }
  std::vector<Checkpoint> owned;
  owned.reserve(paths.size());
  std::vector<Player> players;
  for (const std::string& path : paths) {
    owned.push_back(LoadCheckpointForPool(path, pool, shape));
    players.push_back(MakePolicyPlayer(
        owned.back().theta, shape, std::filesystem::path(path).stem().string()));
  }
  if (include_oracle) players.push_back(MakeOraclePlayer());
  if (include_random) players.push_back(MakeRandomPlayer());
  if (players.size() < 2) {
    std::cerr << "tournament: need at least 2 players\n";
    return 2;
  }

  EvalConfig ec;
  ec.episodes = s.eval_episodes;
  ec.seed = s.seed;
  ec.entropy_floor = s.entropy_floor;
  ec.reward_rounds_unit = RoundsUnit(s);
  ec.reward = MakeRewardConfig(s);
  ec.workers = s.workers;
  const TournamentResult result =
      Tournament(pool.Factory(), pool.size(), players, ec);
  WriteFileOrDie(s.out_dir + "/tournament.csv", result.ToCsv());
  std::cerr << "tournament: " << result.reports.size() << " pairings -> "
            << s.out_dir << "/tournament.csv\n";

  if (!aggregate_label.empty()) {
    std::function<double(const EvalReport&)> metric;
    if (pool.is_rsa) {
      metric = [](const EvalReport& r) { return r.mean_reward_x100; };
    } else {
      metric = [](const EvalReport& r) { return r.attacker_win_rate; };
    }
    const LabelAggregate agg =
        AggregateByLabel(result, aggregate_label, metric);
    std::cout << "include_" << aggregate_label << "=" << agg.include_mean
              << " (" << agg.include_count << " pairings) exclude_"
              << aggregate_label << "=" << agg.exclude_mean << " ("
              << agg.exclude_count << " pairings)\n";
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Self-play dialogue-game training and evaluation"};
  app.require_subcommand(1);

  SettingsCli gen_cli, pre_cli, train_cli, sweep_cli, eval_cli, tour_cli;
  std::string sweep_param, sweep_values;
  std::string eval_opponent = "oracle";
  bool tour_oracle = false, tour_random = false;
  std::string tour_label;

  CLI::App* gen = app.add_subcommand("gen-data", "Generate instance corpora");
  AddSettingsFlags(gen, gen_cli);
  CLI::App* pre =
      app.add_subcommand("pretrain", "Behavior-clone the scripted oracle");
  AddSettingsFlags(pre, pre_cli);
  CLI::App* train = app.add_subcommand("train", "Self-play training");
  AddSettingsFlags(train, train_cli);
  CLI::App* sweep =
      app.add_subcommand("sweep", "Train once per value of one setting");
  AddSettingsFlags(sweep, sweep_cli);
  sweep->add_option("--param", sweep_param, "Setting key to sweep")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required();
  CLI::App* eval =
      app.add_subcommand("eval", "Evaluate a checkpoint in both roles");
  AddSettingsFlags(eval, eval_cli);
  eval->add_option("--opponent", eval_opponent,
                   "oracle | random | self | <checkpoint path>");
  CLI::App* tour =
      app.add_subcommand("tournament", "All-pairings cross-play matrix");
  AddSettingsFlags(tour, tour_cli);
  tour->add_flag("--include-oracle", tour_oracle, "Add the scripted oracle");
  tour->add_flag("--include-random", tour_random, "Add the random player");
  tour->add_option("--aggregate-label", tour_label,
                   "Report include/exclude means for this label substring");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) return CmdGenData(Resolve(gen_cli));
  if (pre->parsed()) return CmdPretrain(Resolve(pre_cli));
  if (train->parsed()) return CmdTrain(Resolve(train_cli));
  if (sweep->parsed()) {
    return CmdSweep(Resolve(sweep_cli), sweep_param, sweep_values);
  }
  if (eval->parsed()) return CmdEval(Resolve(eval_cli), eval_opponent);
  if (tour->parsed()) {
    return CmdTournament(Resolve(tour_cli), tour_oracle, tour_random,
                         tour_label);
  }
  return 2;
}

}  // namespace
}  // namespace fopo

int main(int argc, char** argv) { return fopo::Main(argc, argv); }
