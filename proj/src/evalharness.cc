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

#include "fopo/evalharness.h"

#include <cmath>
#include <cstdio>
#include <thread>
#include <utility>

#include "fopo/check.h"
#include "fopo/rng.h"

namespace fopo {

namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

std::string Csv6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

double RateHalfWidth(double rate, int n) {
  if (n <= 0) return 0.0;
  return kZ95 * std::sqrt(rate * (1.0 - rate) / n);
}

int ChooseAction(const Player& player, Environment& env, Rng& rng) {
  switch (player.kind) {
    case PlayerKind::kPolicy: {
      FOPO_CHECK(player.theta != nullptr);
      return GreedyAction(player.shape, *player.theta, env.MakeRoleContext(),
                          env.MakeStateFeatures());
    }
    case PlayerKind::kOracle:
      return env.OracleAction();
    case PlayerKind::kRandom: {
      const std::vector<int> legal = env.LegalActions();
      FOPO_CHECK(!legal.empty());
      return legal[rng.NextBounded(legal.size())];
    }
  }
  FatalError("Invalid player kind");
}

}  // namespace

Player MakeOraclePlayer(std::string label) {
  Player p;
  p.kind = PlayerKind::kOracle;
  p.label = std::move(label);
  return p;
}

Player MakeRandomPlayer(std::string label) {
  Player p;
  p.kind = PlayerKind::kRandom;
  p.label = std::move(label);
  return p;
}

Player MakePolicyPlayer(const std::vector<double>& theta,
                        const ModelShape& shape, std::string label) {
  Player p;
  p.kind = PlayerKind::kPolicy;
  p.theta = &theta;
  p.shape = shape;
  p.label = std::move(label);
  FOPO_CHECK_EQ(static_cast<int>(theta.size()), ParamCount(shape));
  return p;
}

EvalReport EvaluatePairing(const EnvFactory& factory, int num_instances,
                           const Player& role1, const Player& role2,
                           const EvalConfig& config) {
  FOPO_CHECK_GE(num_instances, 1);
  FOPO_CHECK_GE(config.episodes, 1);
  EvalReport report;
  report.role1_label = role1.label;
  report.role2_label = role2.label;
  report.episodes = config.episodes;

  double reward_sum = 0.0;
  double reward_sq_sum = 0.0;
  double round_gap_sum = 0.0;
  int successes = 0;
  int attacker_wins = 0;
  int defender_wins = 0;
  int ties = 0;
  double entropy_sum = 0.0;
  int entropy_states = 0;

  for (int e = 0; e < config.episodes; ++e) {
    const std::unique_ptr<Environment> env = factory(e % num_instances);
    FOPO_CHECK(env != nullptr);
    env->Reset();
    Rng rng(DeriveSeed(config.seed, static_cast<uint64_t>(e), 0xe7a1, 0));
    while (!env->IsTerminal()) {
      const Player& actor =
          env->CurrentRole() == Role::kAgent1 ? role1 : role2;
      if (actor.kind == PlayerKind::kPolicy) {
        const std::vector<double> dist =
            ActionDistribution(actor.shape, *actor.theta,
                               env->MakeRoleContext(),
                               env->MakeStateFeatures());
        entropy_sum += Entropy(dist);
        ++entropy_states;
      }
      env->Step(ChooseAction(actor, *env, rng));
    }
    Trajectory traj;
    traj.outcome = env->outcome();
    traj.total_turns = env->turn_index();
    env->AssignRewards(traj, config.reward, config.reward_rounds_unit);

    const double reward_x100 = traj.terminal_reward[0] * 100.0;
    reward_sum += reward_x100;
    reward_sq_sum += reward_x100 * reward_x100;
    switch (traj.outcome) {
      case Outcome::kRsaSuccess:
        ++successes;
        break;
      case Outcome::kAttackerWin:
        ++attacker_wins;
        break;
      case Outcome::kDefenderWin:
        ++defender_wins;
        break;
      case Outcome::kTie:
        ++ties;
        break;
      default:
        break;
    }
    const int min_turns = env->OracleMinTurns();
    if (min_turns > 0) {
      round_gap_sum += (traj.total_turns - min_turns) / 2.0;
    }
  }

  const int n = config.episodes;
  report.mean_reward_x100 = reward_sum / n;
  const double var =
      std::max(0.0, reward_sq_sum / n -
                        report.mean_reward_x100 * report.mean_reward_x100);
  report.reward_half_width = kZ95 * std::sqrt(var / n);
  report.success_rate = static_cast<double>(successes) / n;
  report.success_half_width = RateHalfWidth(report.success_rate, n);
  report.mean_round_gap = round_gap_sum / n;
  report.attacker_win_rate = static_cast<double>(attacker_wins) / n;
  report.defender_win_rate = static_cast<double>(defender_wins) / n;
  report.tie_rate = static_cast<double>(ties) / n;
  report.win_half_width = RateHalfWidth(report.attacker_win_rate, n);
  report.mean_entropy =
      entropy_states > 0 ? entropy_sum / entropy_states : 0.0;
  report.entropy_collapsed =
      entropy_states > 0 && report.mean_entropy < config.entropy_floor;
  return report;
}

std::string TournamentResult::ToCsv() const {
  std::string csv =
      "role1,role2,episodes,reward_x100,reward_hw,success,success_hw,"
      "round_gap,att_win,def_win,tie,win_hw,entropy,collapsed\n";
  for (const EvalReport& r : reports) {
    csv += r.role1_label + "," + r.role2_label + "," +
           std::to_string(r.episodes) + "," + Csv6(r.mean_reward_x100) + "," +
           Csv6(r.reward_half_width) + "," + Csv6(r.success_rate) + "," +
           Csv6(r.success_half_width) + "," + Csv6(r.mean_round_gap) + "," +
           Csv6(r.attacker_win_rate) + "," + Csv6(r.defender_win_rate) + "," +
           Csv6(r.tie_rate) + "," + Csv6(r.win_half_width) + "," +
           Csv6(r.mean_entropy) + "," + (r.entropy_collapsed ? "1" : "0") +
           "\n";
  }
  return csv;
}

TournamentResult Tournament(const EnvFactory& factory, int num_instances,
                            const std::vector<Player>& players,
                            const EvalConfig& config) {
  FOPO_CHECK_GE(players.size(), 2u);
  const int n = static_cast<int>(players.size());
  TournamentResult result;
  for (const Player& p : players) result.labels.push_back(p.label);
  result.reports.resize(static_cast<size_t>(n) * n);

  auto run_pairing = [&](int idx) {
    const int i = idx / n;
    const int j = idx % n;
    EvalConfig pairing_config = config;
    pairing_config.seed = DeriveSeed(config.seed, static_cast<uint64_t>(i),
                                     static_cast<uint64_t>(j), 0x70);
    result.reports[idx] = EvaluatePairing(factory, num_instances, players[i],
                                          players[j], pairing_config);
  };
  const int total = n * n;
  const int workers = std::min(config.workers, total);
  if (workers <= 1) {
    for (int idx = 0; idx < total; ++idx) run_pairing(idx);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int idx = w; idx < total; idx += workers) run_pairing(idx);
      });
    }
    for (std::thread& t : pool) t.join();
  }
  return result;
}

LabelAggregate AggregateByLabel(
    const TournamentResult& result, const std::string& label,
    const std::function<double(const EvalReport&)>& metric) {
  LabelAggregate agg;
  for (const EvalReport& r : result.reports) {
    const bool include =
        r.role1_label.find(label) != std::string::npos ||
        r.role2_label.find(label) != std::string::npos;
    if (include) {
      agg.include_mean += metric(r);
      ++agg.include_count;
    } else {
      agg.exclude_mean += metric(r);
      ++agg.exclude_count;
    }
  }
  if (agg.include_count > 0) agg.include_mean /= agg.include_count;
  if (agg.exclude_count > 0) agg.exclude_mean /= agg.exclude_count;
  return agg;
}

EntropyDiagnostics EntropyOverStates(const ModelShape& shape,
                                     const std::vector<double>& theta,
                                     const std::vector<StateRef>& states,
                                     double entropy_floor) {
  FOPO_CHECK(!states.empty());
  EntropyDiagnostics diag;
  diag.num_states = static_cast<int>(states.size());
  for (const StateRef& s : states) {
    diag.mean_entropy +=
        Entropy(ActionDistribution(shape, theta, *s.ctx, *s.sf));
  }
  diag.mean_entropy /= diag.num_states;
  diag.collapsed = diag.mean_entropy < entropy_floor;
  return diag;
}

}  // namespace fopo
