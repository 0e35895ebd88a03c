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
// Role-conditioned softmax policy over a flat parameter vector, with analytic
// gradients and a finite-difference oracle. The policy input is the
// concatenation of the role prompt features and the state features; the
// parameterization is linear (logits = reshape(theta) * input) or, behind a
// flag, a single tanh hidden layer with manual backpropagation. Illegal
// actions are excluded from the softmax normalizer, so their probabilities
// are exactly zero.

#ifndef FOPO_POLICY_H_
#define FOPO_POLICY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fopo/rng.h"

namespace fopo {

enum class Role { kAgent1 = 0, kAgent2 = 1 };
// Game-specific aliases.
inline constexpr Role kSpeaker = Role::kAgent1;
inline constexpr Role kListener = Role::kAgent2;
inline constexpr Role kAttacker = Role::kAgent1;
inline constexpr Role kDefender = Role::kAgent2;

inline Role OtherRole(Role r) {
  return r == Role::kAgent1 ? Role::kAgent2 : Role::kAgent1;
}

// Role conditioning: which agent is acting plus its prompt feature block.
struct RoleContext {
  Role role = Role::kAgent1;
  std::vector<double> prompt_features;
};

// Deterministic per-state feature extraction output. legal_mask runs over the
// full action space of the acting role's game; at least one entry must be set
// in any non-terminal state.
struct StateFeatures {
  std::vector<double> features;
  std::vector<uint8_t> legal_mask;
};

struct ModelShape {
  int input_dim = 0;    // prompt features + state features, concatenated
  int max_actions = 0;  // action-space size (legal_mask length)
  bool hidden = false;  // tanh hidden layer when true
  int hidden_dim = 0;

  bool operator==(const ModelShape& o) const = default;
};

// Flat parameter count for a shape: max_actions*input_dim in the linear case;
// with a hidden layer, both weight matrices plus both bias vectors.
int ParamCount(const ModelShape& shape);

// Gaussian-initialized parameters, scale * N(0,1) per entry.
std::vector<double> InitParameters(const ModelShape& shape, double scale,
                                   Rng& rng);

// Concatenated policy input for (role, state).
std::vector<double> PolicyInput(const RoleContext& ctx,
                                const StateFeatures& sf);

// Masked softmax distribution over actions. Probabilities of illegal actions
// are exactly 0; legal probabilities are positive and sum to 1 within 1e-12.
std::vector<double> ActionDistribution(const ModelShape& shape,
                                       const std::vector<double>& theta,
                                       const RoleContext& ctx,
                                       const StateFeatures& sf);

double LogProb(const ModelShape& shape, const std::vector<double>& theta,
               const RoleContext& ctx, const StateFeatures& sf, int action);

// d/dtheta log p(action | role, state). For the linear parameterization this
// is the classic pattern input * (1[a=k] - p_k) per action row k.
std::vector<double> LogProbGradient(const ModelShape& shape,
                                    const std::vector<double>& theta,
                                    const RoleContext& ctx,
                                    const StateFeatures& sf, int action);

struct RatioResult {
  double ratio = 0.0;
  std::vector<double> grad;  // d ratio / d theta = ratio * dlogp
};

// Likelihood ratio p_theta(a|s) / p_theta_old(a|s) and its theta-gradient.
RatioResult RatioAndGradient(const ModelShape& shape,
                             const std::vector<double>& theta,
                             const std::vector<double>& theta_old,
                             const RoleContext& ctx, const StateFeatures& sf,
                             int action);

// A (role, state) reference used for batched KL computation.
struct StateRef {
  const RoleContext* ctx;
  const StateFeatures* sf;
};

struct KlResult {
  double kl = 0.0;
  std::vector<double> grad;
};

// Batch-mean exact categorical KL(p_theta || p_theta_old) over legal actions,
// plus its gradient in theta (dKL/dz_j = p_j * ((log p_j - log q_j) - KL)).
KlResult KlAndGradient(const ModelShape& shape,
                       const std::vector<double>& theta,
                       const std::vector<double>& theta_old,
                       const std::vector<StateRef>& batch);

// Categorical entropy in nats of a (possibly masked) distribution.
double Entropy(const std::vector<double>& distribution);

// Samples an action from the policy distribution. Bit-deterministic in
// (theta, ctx, sf, rng state).
int SampleAction(const ModelShape& shape, const std::vector<double>& theta,
                 const RoleContext& ctx, const StateFeatures& sf, Rng& rng);

// Highest-probability legal action; ties resolve to the lowest index.
int GreedyAction(const ModelShape& shape, const std::vector<double>& theta,
                 const RoleContext& ctx, const StateFeatures& sf);

// Central-difference gradient oracle: (f(theta+h e_i) - f(theta-h e_i))/(2h).
std::vector<double> FiniteDifferenceGradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& theta, double h);

// ---------------------------------------------------------------------------
// Parameter checkpoints.
//
// Binary little-endian layout (documented in README):
//   bytes 0-7   magic "FOPOCKPT"
//   u32 version (1)
//   u32 game_id
//   u32 feature_map_id
//   u32 flags (bit0 hidden layer, bit1 theta_old present)
//   u32 input_dim, u32 max_actions, u32 hidden_dim
//   u64 d (parameter count), u64 phase, u64 rng_state
//   d f64 theta [, d f64 theta_old]

inline constexpr uint32_t kGameIdRsa = 1;
inline constexpr uint32_t kGameIdTaboo = 2;

struct Checkpoint {
  uint32_t game_id = 0;
  uint32_t feature_map_id = 0;
  ModelShape shape;
  uint64_t phase = 0;
  uint64_t rng_state = 0;
  std::vector<double> theta;
  std::vector<double> theta_old;  // empty when absent
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint DeserializeCheckpoint(const std::string& bytes);
void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace fopo

#endif  // FOPO_POLICY_H_
