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
// Policy-gradient optimizer family. The trust-region update clips the
// likelihood ratio; the foresight variant adds a correction that couples each
// step's update to the counterpart's anticipated next-step improvement; the
// group-relative variants replace decay-propagated advantages with
// group-standardized terminal rewards. Maximum-likelihood pretraining with a
// KL leash toward the initial parameters rounds out the set.

#ifndef FOPO_OPTIM_H_
#define FOPO_OPTIM_H_

#include <optional>
#include <string>
#include <vector>

#include "fopo/policy.h"

namespace fopo {

enum class Algorithm { kPpo, kGrpo, kFopo, kGrFopo };
Algorithm ParseAlgorithm(const std::string& name);
const char* AlgorithmName(Algorithm a);
// Group-relative advantage algorithms (kGrpo, kGrFopo).
bool IsGroupRelative(Algorithm a);
// Algorithms carrying the foresight correction (kFopo, kGrFopo).
bool HasForesight(Algorithm a);

enum class GroupNormMode { kStd, kNoStd };
enum class ForesightDirection {
  kCounterpart,  // correction along the counterpart's ratio gradient
  kSelf,         // correction along the self step's ratio gradient
};

struct UpdateConfig {
  double alpha = 1e-5;
  double beta = 0.1;
  double eta = 0.1;
  double clip_epsilon = 0.2;
  Algorithm algorithm = Algorithm::kFopo;
  int group_size = 4;
  int batch_size = 16;
  double grad_norm_cap = 10.0;
  GroupNormMode group_norm = GroupNormMode::kStd;
  ForesightDirection foresight_direction = ForesightDirection::kCounterpart;

  void Validate() const;
};

// One collected step as the optimizers consume it: what the policy saw, what
// it did, the behavior log-probability from the frozen collection parameters,
// and the advantage attached by the advantage pipeline.
struct StepSample {
  RoleContext ctx;
  StateFeatures features;
  int action = 0;
  double behavior_log_prob = 0.0;
  double advantage = 0.0;
};

// A step paired with its immediate successor by the other agent; the final
// step of a trajectory has no successor.
struct PairedStep {
  StepSample self;
  std::optional<StepSample> counterpart;
};

// min(r*adv, clip(r, 1-eps, 1+eps)*adv).
double ClippedSurrogate(double ratio, double advantage, double clip_epsilon);

// Plain advantage: the decay-propagated step reward itself (no critic).
double AdvantagePlain(double step_reward);

// Group-relative advantages over one instance's G terminal rewards:
// (R - mean)/std with the population std, or mean-centering only in no-std
// mode. A degenerate group (std < 1e-8) yields all zeros.
std::vector<double> AdvantageGroupRelative(const std::vector<double>& rewards,
                                           GroupNormMode mode);

// Batch-mean ascent gradient of the clipped surrogate minus beta times the
// KL(p_theta || p_theta_old) gradient. When the min() selects the clipped
// branch at a ratio outside the trust region, that step's surrogate gradient
// is exactly zero.
std::vector<double> PpoGradient(const ModelShape& shape,
                                const std::vector<StepSample>& batch,
                                const std::vector<double>& theta,
                                const std::vector<double>& theta_old,
                                const UpdateConfig& config);

// The foresight correction for one step pair:
//   v1 = d ratio_self / d theta, v2 = d ratio_counterpart / d theta,
//   O1 = clipped surrogate value of the self step,
//   A2 = clipped surrogate value of the counterpart step / its ratio.
// Default direction: eta * O1 * A2 * <v1, v2> * v2; the `self` direction
// flag yields eta * O1 * A2 * ||v2||^2 * v1. A missing counterpart
// contributes a zero vector.
std::vector<double> FopoCorrection(const ModelShape& shape,
                                   const PairedStep& pair,
                                   const std::vector<double>& theta,
                                   const std::vector<double>& theta_old,
                                   const UpdateConfig& config);

// PpoGradient over the pairs' self steps plus the batch-mean correction.
// Both agents' steps appear as self steps, so the update treats the roles
// symmetrically. With eta = 0 this equals PpoGradient exactly.
std::vector<double> FopoGradient(const ModelShape& shape,
                                 const std::vector<PairedStep>& batch,
                                 const std::vector<double>& theta,
                                 const std::vector<double>& theta_old,
                                 const UpdateConfig& config);

// Dispatch on config.algorithm: group-relative variants consume the same
// batches with advantages already group-normalized upstream.
std::vector<double> AlgorithmGradient(const ModelShape& shape,
                                      const std::vector<PairedStep>& batch,
                                      const std::vector<double>& theta,
                                      const std::vector<double>& theta_old,
                                      const UpdateConfig& config);

// One maximum-likelihood target for pretraining.
struct PretrainSample {
  RoleContext ctx;
  StateFeatures features;
  int target_action = 0;
};

// Batch-mean gradient of log p(target | state) minus beta times the
// KL(p_theta || p_theta_init) gradient.
std::vector<double> PretrainGradient(const ModelShape& shape,
                                     const std::vector<PretrainSample>& batch,
                                     const std::vector<double>& theta,
                                     const std::vector<double>& theta_init,
                                     double beta);

// Ascent step theta += alpha * gradient with a global gradient-norm cap.
// Returns false (theta untouched) when the gradient is non-finite.
bool ApplyUpdate(std::vector<double>& theta, const std::vector<double>& grad,
                 double alpha, double grad_norm_cap);

double VectorNorm(const std::vector<double>& v);
double DotProduct(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fopo

#endif  // FOPO_OPTIM_H_
