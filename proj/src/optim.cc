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

#include "fopo/optim.h"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fopo/check.h"

namespace fopo {

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "ppo") return Algorithm::kPpo;
  if (name == "grpo") return Algorithm::kGrpo;
  if (name == "fopo") return Algorithm::kFopo;
  if (name == "gr_fopo") return Algorithm::kGrFopo;
  FatalError("Unknown algorithm '" + name +
             "' (expected ppo, grpo, fopo, or gr_fopo)");
}

const char* AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kPpo:
      return "ppo";
    case Algorithm::kGrpo:
      return "grpo";
    case Algorithm::kFopo:
      return "fopo";
    case Algorithm::kGrFopo:
      return "gr_fopo";
  }
  FatalError("Invalid algorithm enum value");
}

bool IsGroupRelative(Algorithm a) {
  return a == Algorithm::kGrpo || a == Algorithm::kGrFopo;
}

bool HasForesight(Algorithm a) {
  return a == Algorithm::kFopo || a == Algorithm::kGrFopo;
}

void UpdateConfig::Validate() const {
  FOPO_CHECK_GT(alpha, 0.0);
  FOPO_CHECK_GE(beta, 0.0);
  FOPO_CHECK_GE(eta, 0.0);
  FOPO_CHECK_GT(clip_epsilon, 0.0);
  FOPO_CHECK_LT(clip_epsilon, 1.0);
  FOPO_CHECK_GE(group_size, 1);
  FOPO_CHECK_GE(batch_size, 1);
  FOPO_CHECK_GT(grad_norm_cap, 0.0);
}

double ClippedSurrogate(double ratio, double advantage, double clip_epsilon) {
  const double clipped =
      std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double AdvantagePlain(double step_reward) { return step_reward; }

std::vector<double> AdvantageGroupRelative(const std::vector<double>& rewards,
                                           GroupNormMode mode) {
  FOPO_CHECK(!rewards.empty());
  const int g = static_cast<int>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= g;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= g;
  const double std_dev = std::sqrt(var);
  std::vector<double> out(rewards.size(), 0.0);
  if (mode == GroupNormMode::kStd) {
    if (std_dev < 1e-8) return out;  // Degenerate group: no learning signal.
    for (int i = 0; i < g; ++i) out[i] = (rewards[i] - mean) / std_dev;
  } else {
    for (int i = 0; i < g; ++i) out[i] = rewards[i] - mean;
  }
  return out;
}

namespace {

void AddScaled(std::vector<double>& dst, const std::vector<double>& src,
               double scale) {
  FOPO_CHECK_EQ(dst.size(), src.size());
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
}

// Gradient of min(r*A, clip(r)*A) w.r.t. theta, accumulated into `dst` with
// weight `scale`. The clipped branch is constant in theta, so the gradient is
// A * dr/dtheta when the unclipped branch attains the min and zero otherwise.
// Ties (including A == 0) fall to the unclipped branch, whose gradient there
// matches the subgradient convention used by the reference quantities.
void AccumulateSurrogateGradient(const RatioResult& rr, double advantage,
                                 double clip_epsilon, double scale,
                                 std::vector<double>& dst) {
  const double clipped =
      std::clamp(rr.ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  if (rr.ratio * advantage <= clipped * advantage) {
    AddScaled(dst, rr.grad, scale * advantage);
  }
}

std::vector<StateRef> CollectStates(const std::vector<StepSample>& batch) {
  std::vector<StateRef> states;
  states.reserve(batch.size());
  for (const StepSample& s : batch) {
    states.push_back(StateRef{&s.ctx, &s.features});
  }
  return states;
}

}  // namespace

std::vector<double> PpoGradient(const ModelShape& shape,
                                const std::vector<StepSample>& batch,
                                const std::vector<double>& theta,
                                const std::vector<double>& theta_old,
                                const UpdateConfig& config) {
  FOPO_CHECK(!batch.empty());
  std::vector<double> grad(theta.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  for (const StepSample& s : batch) {
    const RatioResult rr = RatioAndGradient(shape, theta, theta_old, s.ctx,
                                            s.features, s.action);
    AccumulateSurrogateGradient(rr, s.advantage, config.clip_epsilon, inv_b,
                                grad);
  }
  if (config.beta > 0.0) {
    const KlResult kl =
        KlAndGradient(shape, theta, theta_old, CollectStates(batch));
    AddScaled(grad, kl.grad, -config.beta);
  }
  return grad;
}

std::vector<double> FopoCorrection(const ModelShape& shape,
                                   const PairedStep& pair,
                                   const std::vector<double>& theta,
                                   const std::vector<double>& theta_old,
                                   const UpdateConfig& config) {
  std::vector<double> out(theta.size(), 0.0);
  if (!pair.counterpart.has_value()) return out;
  const StepSample& a = pair.self;
  const StepSample& b = *pair.counterpart;
  const RatioResult r1 = RatioAndGradient(shape, theta, theta_old, a.ctx,
                                          a.features, a.action);
  const RatioResult r2 = RatioAndGradient(shape, theta, theta_old, b.ctx,
                                          b.features, b.action);
  const double o1 = ClippedSurrogate(r1.ratio, a.advantage,
                                     config.clip_epsilon);
  // Clip-truncated counterpart advantage: surrogate value with the ratio
  // divided back out, so clipping saturates the term exactly where the
  // counterpart's own update would saturate.
  const double a2 = ClippedSurrogate(r2.ratio, b.advantage,
                                     config.clip_epsilon) /
                    r2.ratio;
  if (config.foresight_direction == ForesightDirection::kCounterpart) {
    const double scale =
        config.eta * o1 * a2 * DotProduct(r1.grad, r2.grad);
    AddScaled(out, r2.grad, scale);
  } else {
    const double norm2 = DotProduct(r2.grad, r2.grad);
    const double scale = config.eta * o1 * a2 * norm2;
    AddScaled(out, r1.grad, scale);
  }
  return out;
}

std::vector<double> FopoGradient(const ModelShape& shape,
                                 const std::vector<PairedStep>& batch,
                                 const std::vector<double>& theta,
                                 const std::vector<double>& theta_old,
                                 const UpdateConfig& config) {
  FOPO_CHECK(!batch.empty());
  std::vector<StepSample> selfs;
  selfs.reserve(batch.size());
  for (const PairedStep& p : batch) selfs.push_back(p.self);
  std::vector<double> grad =
      PpoGradient(shape, selfs, theta, theta_old, config);
  if (config.eta > 0.0) {
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (const PairedStep& p : batch) {
      const std::vector<double> corr =
          FopoCorrection(shape, p, theta, theta_old, config);
      AddScaled(grad, corr, inv_b);
    }
  }
  return grad;
}

std::vector<double> AlgorithmGradient(const ModelShape& shape,
                                      const std::vector<PairedStep>& batch,
                                      const std::vector<double>& theta,
                                      const std::vector<double>& theta_old,
                                      const UpdateConfig& config) {
  if (HasForesight(config.algorithm)) {
    return FopoGradient(shape, batch, theta, theta_old, config);
  }
  std::vector<StepSample> selfs;
  selfs.reserve(batch.size());
  for (const PairedStep& p : batch) selfs.push_back(p.self);
  return PpoGradient(shape, selfs, theta, theta_old, config);
}

std::vector<double> PretrainGradient(const ModelShape& shape,
                                     const std::vector<PretrainSample>& batch,
                                     const std::vector<double>& theta,
                                     const std::vector<double>& theta_init,
                                     double beta) {
  FOPO_CHECK(!batch.empty());
  std::vector<double> grad(theta.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  std::vector<StateRef> states;
  states.reserve(batch.size());
  for (const PretrainSample& s : batch) {
    const std::vector<double> g =
        LogProbGradient(shape, theta, s.ctx, s.features, s.target_action);
    AddScaled(grad, g, inv_b);
    states.push_back(StateRef{&s.ctx, &s.features});
  }
  if (beta > 0.0) {
    const KlResult kl = KlAndGradient(shape, theta, theta_init, states);
    AddScaled(grad, kl.grad, -beta);
  }
  return grad;
}

bool ApplyUpdate(std::vector<double>& theta, const std::vector<double>& grad,
                 double alpha, double grad_norm_cap) {
  FOPO_CHECK_EQ(theta.size(), grad.size());
  FOPO_CHECK_GT(grad_norm_cap, 0.0);
  double norm_sq = 0.0;
  for (double g : grad) {
    if (!std::isfinite(g)) return false;
    norm_sq += g * g;
  }
  if (!std::isfinite(norm_sq)) return false;
  const double norm = std::sqrt(norm_sq);
  const double scale = norm > grad_norm_cap ? grad_norm_cap / norm : 1.0;
  for (size_t i = 0; i < theta.size(); ++i) {
    theta[i] += alpha * scale * grad[i];
    FOPO_CHECK_FINITE(theta[i]);
  }
  return true;
}

double VectorNorm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double DotProduct(const std::vector<double>& a, const std::vector<double>& b) {
  FOPO_CHECK_EQ(a.size(), b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace fopo
