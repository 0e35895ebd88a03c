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

#include "fopo/rsa_env.h"

#include <algorithm>

#include "fopo/check.h"
#include "fopo/rewards.h"

namespace fopo {

// Feature layout (one block per role; the inactive role's block is zeroed so
// shared parameters cannot couple the two roles through state features):
//   [0..1]  role one-hot lives in RoleContext::prompt_features
//   speaker block, per dimension m (4 entries each), then candidate fraction:
//     unused flag, target-rank fraction rank_m/|O|, rank-argmin flag,
//     feature-count fraction |f_m|/|O|
//   listener block (5 entries), then per object slot j (2 entries each):
//     candidate fraction |O|/N, literal-filter fraction, pragmatic-update
//     fraction, pragmatic-singleton flag, literal-singleton flag,
//     [j in candidates, j in pragmatic update]
// These expose the exact Bayesian statistics each role could compute itself;
// the map is part of this artifact's design space (the games' public rules
// are common knowledge, and neither block leaks the target's identity to the
// listener).

int RsaEnvConfig::MaxActions() const {
  return std::max(max_dims, kListenerDeclareBase + max_objects);
}

ModelShape RsaEnvConfig::Shape(bool hidden, int hidden_dim) const {
  ModelShape shape;
  shape.input_dim = 2 + (4 * max_dims + 1) + (5 + 2 * max_objects);
  shape.max_actions = MaxActions();
  shape.hidden = hidden;
  shape.hidden_dim = hidden ? hidden_dim : 0;
  return shape;
}

RsaEnv::RsaEnv(const RsaEnvConfig& config, ObjectSet instance, std::string id)
    : config_(config), instance_(std::move(instance)), id_(std::move(id)) {
  instance_.Validate();
  FOPO_CHECK_GE(instance_.num_objects(), 2);
  FOPO_CHECK_LE(instance_.num_dims(), config_.max_dims);
  FOPO_CHECK_LE(instance_.num_objects(), config_.max_objects);
  shape_ = config_.Shape(/*hidden=*/false, /*hidden_dim=*/0);
  golden_ = TryComputeGoldenChain(instance_);
  Reset();
}

int RsaEnv::min_rounds() const {
  FOPO_CHECK(golden_.has_value());
  return golden_->min_rounds;
}

void RsaEnv::AssignRewards(Trajectory& trajectory, const RewardConfig& config,
                           bool rounds_unit) const {
  AssignTerminalRewards(trajectory, min_rounds(), instance_.num_dims(),
                        rounds_unit, config);
}

void RsaEnv::Reset() {
  outcome_ = Outcome::kOngoing;
  turn_ = 0;
  candidates_ = FullCandidateSet(instance_);
  used_dims_.assign(instance_.num_dims(), 0);
  uttered_.clear();
}

Feature RsaEnv::LastFeature() const {
  FOPO_CHECK(!uttered_.empty());
  return uttered_.back();
}

RoleContext RsaEnv::MakeRoleContext() const {
  FOPO_CHECK(!IsTerminal());
  RoleContext ctx;
  ctx.role = CurrentRole();
  ctx.prompt_features = ctx.role == kSpeaker ? std::vector<double>{1.0, 0.0}
                                             : std::vector<double>{0.0, 1.0};
  return ctx;
}

StateFeatures RsaEnv::MakeStateFeatures() const {
  FOPO_CHECK(!IsTerminal());
  const int n_candidates = static_cast<int>(candidates_.size());
  const double size_frac =
      static_cast<double>(n_candidates) / instance_.num_objects();

  std::vector<double> speaker_block(4 * config_.max_dims + 1, 0.0);
  std::vector<double> listener_block(5 + 2 * config_.max_objects, 0.0);
  StateFeatures sf;
  sf.legal_mask.assign(config_.MaxActions(), 0);

  if (CurrentRole() == kSpeaker) {
    int argmin_dim =
        SelectFeature(instance_, candidates_, instance_.target_index,
                      used_dims_)
            .dim;
    for (int m = 0; m < instance_.num_dims(); ++m) {
      if (used_dims_[m]) continue;
      Feature f = FeatureOf(instance_, instance_.target_index, m);
      double* row = speaker_block.data() + 4 * m;
      row[0] = 1.0;
      row[1] = static_cast<double>(TargetRank(instance_, candidates_, f,
                                              instance_.target_index)) /
               n_candidates;
      row[2] = m == argmin_dim ? 1.0 : 0.0;
      row[3] = static_cast<double>(FeatureCount(instance_, candidates_, f)) /
               n_candidates;
      sf.legal_mask[m] = 1;
    }
    speaker_block[4 * config_.max_dims] = size_frac;
  } else {
    Feature last = LastFeature();
    CandidateSet literal = LiteralFilter(instance_, candidates_, last);
    CandidateSet pragmatic = ListenerUpdate(instance_, candidates_, last);
    listener_block[0] = size_frac;
    listener_block[1] =
        static_cast<double>(literal.size()) / n_candidates;
    listener_block[2] =
        static_cast<double>(pragmatic.size()) / n_candidates;
    listener_block[3] = pragmatic.size() == 1 ? 1.0 : 0.0;
    listener_block[4] = literal.size() == 1 ? 1.0 : 0.0;
    for (int j = 0; j < instance_.num_objects(); ++j) {
      double* row = listener_block.data() + 5 + 2 * j;
      bool in_candidates = Contains(candidates_, j);
      row[0] = in_candidates ? 1.0 : 0.0;
      row[1] = Contains(pragmatic, j) ? 1.0 : 0.0;
      if (in_candidates) sf.legal_mask[kListenerDeclareBase + j] = 1;
    }
    sf.legal_mask[kListenerLiteralUpdate] = 1;
    sf.legal_mask[kListenerPragmaticUpdate] = 1;
  }

  sf.features.reserve(speaker_block.size() + listener_block.size());
  sf.features.insert(sf.features.end(), speaker_block.begin(),
                     speaker_block.end());
  sf.features.insert(sf.features.end(), listener_block.begin(),
                     listener_block.end());
  return sf;
}

std::vector<int> RsaEnv::LegalActions() const {
  FOPO_CHECK(!IsTerminal());
  std::vector<int> actions;
  if (CurrentRole() == kSpeaker) {
    for (int m = 0; m < instance_.num_dims(); ++m) {
      if (!used_dims_[m]) actions.push_back(m);
    }
  } else {
    actions.push_back(kListenerLiteralUpdate);
    actions.push_back(kListenerPragmaticUpdate);
    for (int j : candidates_) actions.push_back(kListenerDeclareBase + j);
  }
  FOPO_CHECK(!actions.empty());
  return actions;
}

void RsaEnv::CheckSpeakerExhaustion() {
  // Called on states where the speaker is to act: if no unused feature
  // remains while identification is incomplete, the game times out as a
  // failure — terminal detection happens before any agent is asked to act,
  // so non-terminal states always offer at least one legal action.
  if (CurrentRole() != kSpeaker || IsTerminal()) return;
  bool any_unused =
      std::count(used_dims_.begin(), used_dims_.end(), 0) > 0;
  if (!any_unused) outcome_ = Outcome::kRsaFailure;
}

void RsaEnv::Step(int action) {
  FOPO_CHECK(!IsTerminal());
  std::vector<int> legal = LegalActions();
  FOPO_CHECK(std::find(legal.begin(), legal.end(), action) != legal.end());

  if (CurrentRole() == kSpeaker) {
    Feature f = FeatureOf(instance_, instance_.target_index, action);
    uttered_.push_back(f);
    used_dims_[action] = 1;
    ++turn_;
    return;
  }

  // Listener turn.
  if (action >= kListenerDeclareBase) {
    int declared = action - kListenerDeclareBase;
    ++turn_;
    outcome_ = declared == instance_.target_index ? Outcome::kRsaSuccess
                                                  : Outcome::kRsaFailure;
    return;
  }
  Feature last = LastFeature();
  CandidateSet next = action == kListenerLiteralUpdate
                          ? LiteralFilter(instance_, candidates_, last)
                          : ListenerUpdate(instance_, candidates_, last);
  ++turn_;
  if (!Contains(next, instance_.target_index)) {
    outcome_ = Outcome::kRsaFailure;
    return;
  }
  candidates_ = std::move(next);
  if (candidates_.size() == 1) {
    // The remaining object is the target (checked above); the implied
    // declaration is part of this listener turn.
    outcome_ = Outcome::kRsaSuccess;
    return;
  }
  CheckSpeakerExhaustion();
}

int RsaEnv::OracleAction() const {
  FOPO_CHECK(!IsTerminal());
  if (CurrentRole() == kSpeaker) {
    return SelectFeature(instance_, candidates_, instance_.target_index,
                         used_dims_)
        .dim;
  }
  return kListenerPragmaticUpdate;
}

}  // namespace fopo
