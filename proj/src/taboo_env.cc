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

#include "fopo/taboo_env.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fopo/check.h"
#include "fopo/policy.h"
#include "fopo/rewards.h"

namespace fopo {

void TabooWorld::Validate() const {
  FOPO_CHECK_GE(num_words, 2);
  FOPO_CHECK_GE(num_cues, num_words);
  FOPO_CHECK_EQ(static_cast<int>(weights.size()), num_words);
  FOPO_CHECK_GE(target_word, 0);
  FOPO_CHECK_LT(target_word, num_words);
  FOPO_CHECK_GE(max_turns, 2);
  for (const auto& row : weights) {
    FOPO_CHECK_EQ(static_cast<int>(row.size()), num_cues);
    double sum = 0.0;
    bool any_positive = false;
    for (double w : row) {
      FOPO_CHECK_GE(w, 0.0);
      any_positive = any_positive || w > 0.0;
      sum += w;
    }
    FOPO_CHECK(any_positive);
    FOPO_CHECK_LE(std::abs(sum - 1.0), 1e-12);
  }
}

std::vector<int> TabooWorld::TopWords(int cue, int top_k) const {
  FOPO_CHECK_GE(cue, 0);
  FOPO_CHECK_LT(cue, num_cues);
  std::vector<int> order(num_words);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return weights[a][cue] > weights[b][cue];
  });
  order.resize(std::min<int>(top_k, num_words));
  return order;
}

TabooWorld GenerateTabooWorld(uint64_t seed, int num_words, int num_cues,
                              int max_turns) {
  FOPO_CHECK_GE(num_words, 4);
  FOPO_CHECK_GE(num_cues, num_words);
  TabooWorld world;
  world.num_words = num_words;
  world.num_cues = num_cues;
  world.max_turns = max_turns;
  world.weights.assign(num_words, std::vector<double>(num_cues, 0.0));
  Rng rng(seed);
  for (int w = 0; w < num_words; ++w) {
    auto& row = world.weights[w];
    double max_base = 0.0;
    for (int c = 0; c < num_cues; ++c) {
      row[c] = 0.1 + 0.9 * rng.NextDouble();
      max_base = std::max(max_base, row[c]);
    }
    // Boost word w's signature cue (cue w) strictly above everything else in
    // the row, making top-cue profiles distinct across words.
    row[w] = 2.0 * max_base;
    double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& v : row) v /= sum;
  }
  // Generation-time rejection checks: identical rows or clashing top cues
  // would make the game uninformative. The construction above rules both out;
  // these checks guard against regressions rather than retry.
  std::set<std::vector<double>> rows(world.weights.begin(),
                                     world.weights.end());
  FOPO_CHECK_EQ(static_cast<int>(rows.size()), num_words);
  std::set<int> top_cues;
  for (int w = 0; w < num_words; ++w) {
    const auto& row = world.weights[w];
    int top = static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin());
    FOPO_CHECK_EQ(top, w);
    top_cues.insert(top);
  }
  FOPO_CHECK_EQ(static_cast<int>(top_cues.size()), num_words);
  return world;
}

std::vector<double> WordPosterior(const TabooWorld& world,
                                  const std::vector<int>& cue_history) {
  // Product of per-cue likelihoods in log space, uniform prior.
  std::vector<double> log_post(world.num_words, 0.0);
  for (int cue : cue_history) {
    for (int w = 0; w < world.num_words; ++w) {
      log_post[w] += std::log(world.weights[w][cue]);
    }
  }
  double max_log = *std::max_element(log_post.begin(), log_post.end());
  double sum = 0.0;
  std::vector<double> post(world.num_words);
  for (int w = 0; w < world.num_words; ++w) {
    post[w] = std::exp(log_post[w] - max_log);
    sum += post[w];
  }
  for (double& p : post) p /= sum;
  return post;
}

// Feature layout (inactive role's block zeroed, as in the reference game):
//   attacker block, per cue c (4 entries each), then turn fraction:
//     association weight target->c, cue-used flag, signature-of-target flag,
//     defender posterior on the target if c were played next
//   defender block: max posterior, posterior entropy (normalized by ln K),
//     then per respond slot (2 entries): last-cue association weight of the
//     slot's word, posterior of that word; then per word w: posterior of w.
// The attacker knows the target; the defender sees only posterior statistics.

int TabooEnvConfig::MaxActions() const {
  return std::max(num_cues, top_k + num_words);
}

ModelShape TabooEnvConfig::Shape(bool hidden, int hidden_dim) const {
  ModelShape shape;
  shape.input_dim = 2 + (4 * num_cues + 1) + (2 + 2 * top_k + num_words);
  shape.max_actions = MaxActions();
  shape.hidden = hidden;
  shape.hidden_dim = hidden ? hidden_dim : 0;
  return shape;
}

TabooEnv::TabooEnv(const TabooEnvConfig& config, TabooWorld world,
                   std::string id)
    : config_(config), world_(std::move(world)), id_(std::move(id)) {
  world_.Validate();
  FOPO_CHECK_EQ(world_.num_words, config_.num_words);
  FOPO_CHECK_EQ(world_.num_cues, config_.num_cues);
  FOPO_CHECK_LE(config_.top_k, config_.num_words);
  FOPO_CHECK_GE(config_.top_k, 1);
  shape_ = config_.Shape(/*hidden=*/false, /*hidden_dim=*/0);
  Reset();
}

void TabooEnv::Reset() {
  outcome_ = Outcome::kOngoing;
  turn_ = 0;
  cue_history_.clear();
  response_history_.clear();
}

RoleContext TabooEnv::MakeRoleContext() const {
  FOPO_CHECK(!IsTerminal());
  RoleContext ctx;
  ctx.role = CurrentRole();
  ctx.prompt_features = ctx.role == kAttacker ? std::vector<double>{1.0, 0.0}
                                              : std::vector<double>{0.0, 1.0};
  return ctx;
}

StateFeatures TabooEnv::MakeStateFeatures() const {
  FOPO_CHECK(!IsTerminal());
  std::vector<double> attacker_block(4 * config_.num_cues + 1, 0.0);
  std::vector<double> defender_block(2 + 2 * config_.top_k + config_.num_words,
                                     0.0);
  StateFeatures sf;
  sf.legal_mask.assign(config_.MaxActions(), 0);

  if (CurrentRole() == kAttacker) {
    const auto& target_row = world_.weights[world_.target_word];
    std::vector<int> played(world_.num_cues, 0);
    for (int c : cue_history_) played[c] = 1;
    std::vector<int> history = cue_history_;
    for (int c = 0; c < world_.num_cues; ++c) {
      double* row = attacker_block.data() + 4 * c;
      row[0] = target_row[c];
      row[1] = played[c] ? 1.0 : 0.0;
      row[2] = c == world_.target_word ? 1.0 : 0.0;  // signature cue of target
      history.push_back(c);
      row[3] = WordPosterior(world_, history)[world_.target_word];
      history.pop_back();
      sf.legal_mask[c] = 1;
    }
    attacker_block[4 * config_.num_cues] =
        static_cast<double>(turn_) / world_.max_turns;
  } else {
    std::vector<double> post = WordPosterior(world_, cue_history_);
    double max_p = *std::max_element(post.begin(), post.end());
    defender_block[0] = max_p;
    defender_block[1] =
        Entropy(post) / std::log(static_cast<double>(world_.num_words));
    int last_cue = cue_history_.back();
    std::vector<int> top = world_.TopWords(last_cue, config_.top_k);
    for (size_t i = 0; i < top.size(); ++i) {
      double* row = defender_block.data() + 2 + 2 * i;
      row[0] = world_.weights[top[i]][last_cue];
      row[1] = post[top[i]];
      sf.legal_mask[i] = 1;
    }
    for (int w = 0; w < world_.num_words; ++w) {
      defender_block[2 + 2 * config_.top_k + w] = post[w];
      sf.legal_mask[config_.top_k + w] = 1;
    }
  }

  sf.features.reserve(attacker_block.size() + defender_block.size());
  sf.features.insert(sf.features.end(), attacker_block.begin(),
                     attacker_block.end());
  sf.features.insert(sf.features.end(), defender_block.begin(),
                     defender_block.end());
  return sf;
}

std::vector<int> TabooEnv::LegalActions() const {
  FOPO_CHECK(!IsTerminal());
  std::vector<int> actions;
  if (CurrentRole() == kAttacker) {
    for (int c = 0; c < world_.num_cues; ++c) actions.push_back(c);
  } else {
    int slots = static_cast<int>(
        world_.TopWords(cue_history_.back(), config_.top_k).size());
    for (int i = 0; i < slots; ++i) actions.push_back(i);
    for (int w = 0; w < world_.num_words; ++w) {
      actions.push_back(config_.top_k + w);
    }
  }
  return actions;
}

void TabooEnv::Step(int action) {
  FOPO_CHECK(!IsTerminal());
  std::vector<int> legal = LegalActions();
  FOPO_CHECK(std::find(legal.begin(), legal.end(), action) != legal.end());

  if (CurrentRole() == kAttacker) {
    cue_history_.push_back(action);
    ++turn_;
    return;
  }

  if (action >= config_.top_k) {
    // Single irreversible guess: right wins, wrong loses outright.
    int guessed = action - config_.top_k;
    ++turn_;
    outcome_ = guessed == world_.target_word ? Outcome::kDefenderWin
                                             : Outcome::kAttackerWin;
    return;
  }
  std::vector<int> top = world_.TopWords(cue_history_.back(), config_.top_k);
  int spoken = top[action];
  response_history_.push_back(spoken);
  ++turn_;
  if (spoken == world_.target_word) {
    outcome_ = Outcome::kAttackerWin;  // induced into uttering the target
    return;
  }
  if (turn_ >= world_.max_turns) outcome_ = Outcome::kTie;
}

int TabooEnv::OracleAction() const {
  FOPO_CHECK(!IsTerminal());
  if (CurrentRole() == kAttacker) {
    // Strongest not-yet-played cue for the target; falls back to the overall
    // strongest cue once all have been played.
    const auto& row = world_.weights[world_.target_word];
    std::vector<int> played(world_.num_cues, 0);
    for (int c : cue_history_) played[c] = 1;
    int best = -1;
    for (int c = 0; c < world_.num_cues; ++c) {
      if (played[c]) continue;
      if (best < 0 || row[c] > row[best]) best = c;
    }
    if (best < 0) {
      best = static_cast<int>(
          std::max_element(row.begin(), row.end()) - row.begin());
    }
    return best;
  }
  std::vector<double> post = WordPosterior(world_, cue_history_);
  int argmax = static_cast<int>(
      std::max_element(post.begin(), post.end()) - post.begin());
  if (post[argmax] > config_.guess_threshold) return config_.top_k + argmax;
  return 0;  // respond with the last cue's top word
}

void TabooEnv::AssignRewards(Trajectory& trajectory, const RewardConfig& config,
                             bool rounds_unit) const {
  (void)rounds_unit;  // no turn-efficiency shaping in the zero-sum game
  AssignTerminalRewards(trajectory, config);
}

}  // namespace fopo
