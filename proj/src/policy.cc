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

#include "fopo/policy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "fopo/check.h"
#include "fopo/config.h"

namespace fopo {

namespace {

// Parameter layout offsets for the hidden parameterization:
// W1 [H x D], b1 [H], W2 [A x H], b2 [A].
struct HiddenOffsets {
  int w1, b1, w2, b2;
};

HiddenOffsets OffsetsFor(const ModelShape& shape) {
  int hd = shape.hidden_dim * shape.input_dim;
  return {0, hd, hd + shape.hidden_dim,
          hd + shape.hidden_dim + shape.max_actions * shape.hidden_dim};
}

// Forward pass to logits; when `hidden_out` is non-null the tanh activations
// are stored there for backprop reuse.
std::vector<double> ComputeLogits(const ModelShape& shape,
                                  const std::vector<double>& theta,
                                  const std::vector<double>& input,
                                  std::vector<double>* hidden_out = nullptr) {
  FOPO_CHECK_EQ(static_cast<int>(input.size()), shape.input_dim);
  FOPO_CHECK_EQ(static_cast<int>(theta.size()), ParamCount(shape));
  std::vector<double> logits(shape.max_actions, 0.0);
  if (!shape.hidden) {
    for (int k = 0; k < shape.max_actions; ++k) {
      const double* row = theta.data() + k * shape.input_dim;
      double z = 0.0;
      for (int j = 0; j < shape.input_dim; ++j) z += row[j] * input[j];
      logits[k] = z;
    }
    return logits;
  }
  HiddenOffsets off = OffsetsFor(shape);
  std::vector<double> h(shape.hidden_dim);
  for (int i = 0; i < shape.hidden_dim; ++i) {
    const double* row = theta.data() + off.w1 + i * shape.input_dim;
    double u = theta[off.b1 + i];
    for (int j = 0; j < shape.input_dim; ++j) u += row[j] * input[j];
    h[i] = std::tanh(u);
  }
  for (int k = 0; k < shape.max_actions; ++k) {
    const double* row = theta.data() + off.w2 + k * shape.hidden_dim;
    double z = theta[off.b2 + k];
    for (int i = 0; i < shape.hidden_dim; ++i) z += row[i] * h[i];
    logits[k] = z;
  }
  if (hidden_out != nullptr) *hidden_out = std::move(h);
  return logits;
}

// Accumulates d(objective)/d(theta) given d(objective)/d(logits).
void BackpropLogits(const ModelShape& shape, const std::vector<double>& theta,
                    const std::vector<double>& input,
                    const std::vector<double>& hidden,
                    const std::vector<double>& dlogits,
                    std::vector<double>& grad) {
  FOPO_CHECK_EQ(grad.size(), theta.size());
  if (!shape.hidden) {
    for (int k = 0; k < shape.max_actions; ++k) {
      double dz = dlogits[k];
      if (dz == 0.0) continue;
      double* row = grad.data() + k * shape.input_dim;
      for (int j = 0; j < shape.input_dim; ++j) row[j] += dz * input[j];
    }
    return;
  }
  HiddenOffsets off = OffsetsFor(shape);
  std::vector<double> dh(shape.hidden_dim, 0.0);
  for (int k = 0; k < shape.max_actions; ++k) {
    double dz = dlogits[k];
    if (dz == 0.0) continue;
    grad[off.b2 + k] += dz;
    const double* w2row = theta.data() + off.w2 + k * shape.hidden_dim;
    double* g2row = grad.data() + off.w2 + k * shape.hidden_dim;
    for (int i = 0; i < shape.hidden_dim; ++i) {
      g2row[i] += dz * hidden[i];
      dh[i] += dz * w2row[i];
    }
  }
  for (int i = 0; i < shape.hidden_dim; ++i) {
    double du = dh[i] * (1.0 - hidden[i] * hidden[i]);
    if (du == 0.0) continue;
    grad[off.b1 + i] += du;
    double* g1row = grad.data() + off.w1 + i * shape.input_dim;
    for (int j = 0; j < shape.input_dim; ++j) g1row[j] += du * input[j];
  }
}

// Masked log-softmax with max-subtraction. Returns per-action probabilities
// (0 for illegal) and, via out-params, the log-normalizer pieces needed for
// exact log-probabilities.
std::vector<double> MaskedSoftmax(const std::vector<double>& logits,
                                  const std::vector<uint8_t>& legal,
                                  double* max_logit_out = nullptr,
                                  double* log_z_out = nullptr) {
  FOPO_CHECK_EQ(logits.size(), legal.size());
  double max_logit = -HUGE_VAL;
  int legal_count = 0;
  for (size_t k = 0; k < logits.size(); ++k) {
    if (!legal[k]) continue;
    FOPO_CHECK_FINITE(logits[k]);
    ++legal_count;
    max_logit = std::max(max_logit, logits[k]);
  }
  FOPO_CHECK_GE(legal_count, 1);
  double z = 0.0;
  std::vector<double> probs(logits.size(), 0.0);
  for (size_t k = 0; k < logits.size(); ++k) {
    if (!legal[k]) continue;
    probs[k] = std::exp(logits[k] - max_logit);
    z += probs[k];
  }
  for (size_t k = 0; k < logits.size(); ++k) probs[k] /= z;
  if (max_logit_out != nullptr) *max_logit_out = max_logit;
  if (log_z_out != nullptr) *log_z_out = std::log(z);
  return probs;
}

}  // namespace

int ParamCount(const ModelShape& shape) {
  FOPO_CHECK_GT(shape.input_dim, 0);
  FOPO_CHECK_GT(shape.max_actions, 0);
  if (!shape.hidden) return shape.max_actions * shape.input_dim;
  FOPO_CHECK_GT(shape.hidden_dim, 0);
  return shape.hidden_dim * shape.input_dim + shape.hidden_dim +
         shape.max_actions * shape.hidden_dim + shape.max_actions;
}

std::vector<double> InitParameters(const ModelShape& shape, double scale,
                                   Rng& rng) {
  std::vector<double> theta(ParamCount(shape));
  for (double& v : theta) v = scale * rng.NextGaussian();
  return theta;
}

std::vector<double> PolicyInput(const RoleContext& ctx,
                                const StateFeatures& sf) {
  std::vector<double> input;
  input.reserve(ctx.prompt_features.size() + sf.features.size());
  input.insert(input.end(), ctx.prompt_features.begin(),
               ctx.prompt_features.end());
  input.insert(input.end(), sf.features.begin(), sf.features.end());
  return input;
}

std::vector<double> ActionDistribution(const ModelShape& shape,
                                       const std::vector<double>& theta,
                                       const RoleContext& ctx,
                                       const StateFeatures& sf) {
  std::vector<double> logits = ComputeLogits(shape, theta, PolicyInput(ctx, sf));
  return MaskedSoftmax(logits, sf.legal_mask);
}

double LogProb(const ModelShape& shape, const std::vector<double>& theta,
               const RoleContext& ctx, const StateFeatures& sf, int action) {
  FOPO_CHECK_GE(action, 0);
  FOPO_CHECK_LT(action, static_cast<int>(sf.legal_mask.size()));
  FOPO_CHECK(sf.legal_mask[action]);
  std::vector<double> logits = ComputeLogits(shape, theta, PolicyInput(ctx, sf));
  double max_logit = 0.0, log_z = 0.0;
  (void)MaskedSoftmax(logits, sf.legal_mask, &max_logit, &log_z);
  return logits[action] - max_logit - log_z;
}

std::vector<double> LogProbGradient(const ModelShape& shape,
                                    const std::vector<double>& theta,
                                    const RoleContext& ctx,
                                    const StateFeatures& sf, int action) {
  FOPO_CHECK(sf.legal_mask[action]);
  std::vector<double> input = PolicyInput(ctx, sf);
  std::vector<double> hidden;
  std::vector<double> logits = ComputeLogits(shape, theta, input, &hidden);
  std::vector<double> probs = MaskedSoftmax(logits, sf.legal_mask);
  // d log p(a) / d z_k = 1[k=a] - p_k on legal actions, 0 on illegal ones.
  std::vector<double> dlogits(probs.size(), 0.0);
  for (size_t k = 0; k < probs.size(); ++k) {
    if (!sf.legal_mask[k]) continue;
    dlogits[k] = (static_cast<int>(k) == action ? 1.0 : 0.0) - probs[k];
  }
  std::vector<double> grad(theta.size(), 0.0);
  BackpropLogits(shape, theta, input, hidden, dlogits, grad);
  return grad;
}

RatioResult RatioAndGradient(const ModelShape& shape,
                             const std::vector<double>& theta,
                             const std::vector<double>& theta_old,
                             const RoleContext& ctx, const StateFeatures& sf,
                             int action) {
  double logp = LogProb(shape, theta, ctx, sf, action);
  double logp_old = LogProb(shape, theta_old, ctx, sf, action);
  if (!std::isfinite(logp_old)) {
    FatalError("degenerate ratio: behavior probability is zero");
  }
  RatioResult out;
  out.ratio = std::exp(logp - logp_old);
  FOPO_CHECK_GT(out.ratio, 0.0);
  out.grad = LogProbGradient(shape, theta, ctx, sf, action);
  for (double& g : out.grad) g *= out.ratio;
  return out;
}

KlResult KlAndGradient(const ModelShape& shape,
                       const std::vector<double>& theta,
                       const std::vector<double>& theta_old,
                       const std::vector<StateRef>& batch) {
  FOPO_CHECK(!batch.empty());
  KlResult out;
  out.grad.assign(theta.size(), 0.0);
  for (const StateRef& ref : batch) {
    std::vector<double> input = PolicyInput(*ref.ctx, *ref.sf);
    std::vector<double> hidden;
    std::vector<double> logits = ComputeLogits(shape, theta, input, &hidden);
    std::vector<double> probs = MaskedSoftmax(logits, ref.sf->legal_mask);
    std::vector<double> logits_old =
        ComputeLogits(shape, theta_old, input);
    double max_old = 0.0, log_z_old = 0.0;
    (void)MaskedSoftmax(logits_old, ref.sf->legal_mask, &max_old, &log_z_old);
    double max_cur = 0.0, log_z_cur = 0.0;
    (void)MaskedSoftmax(logits, ref.sf->legal_mask, &max_cur, &log_z_cur);

    double kl = 0.0;
    std::vector<double> log_diff(probs.size(), 0.0);
    for (size_t k = 0; k < probs.size(); ++k) {
      if (!ref.sf->legal_mask[k] || probs[k] <= 0.0) continue;
      double logp = logits[k] - max_cur - log_z_cur;
      double logq = logits_old[k] - max_old - log_z_old;
      log_diff[k] = logp - logq;
      kl += probs[k] * log_diff[k];
    }
    std::vector<double> dlogits(probs.size(), 0.0);
    for (size_t k = 0; k < probs.size(); ++k) {
      if (!ref.sf->legal_mask[k]) continue;
      dlogits[k] = probs[k] * (log_diff[k] - kl);
    }
    out.kl += kl;
    BackpropLogits(shape, theta, input, hidden, dlogits, out.grad);
  }
  double inv = 1.0 / static_cast<double>(batch.size());
  out.kl *= inv;
  for (double& g : out.grad) g *= inv;
  return out;
}

double Entropy(const std::vector<double>& distribution) {
  double h = 0.0;
  for (double p : distribution) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

int SampleAction(const ModelShape& shape, const std::vector<double>& theta,
                 const RoleContext& ctx, const StateFeatures& sf, Rng& rng) {
  std::vector<double> probs = ActionDistribution(shape, theta, ctx, sf);
  return rng.SampleIndex(probs);
}

int GreedyAction(const ModelShape& shape, const std::vector<double>& theta,
                 const RoleContext& ctx, const StateFeatures& sf) {
  std::vector<double> probs = ActionDistribution(shape, theta, ctx, sf);
  int best = -1;
  double best_p = -1.0;
  for (size_t k = 0; k < probs.size(); ++k) {
    if (sf.legal_mask[k] && probs[k] > best_p) {
      best_p = probs[k];
      best = static_cast<int>(k);
    }
  }
  FOPO_CHECK_GE(best, 0);
  return best;
}

std::vector<double> FiniteDifferenceGradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& theta, double h) {
  FOPO_CHECK_GT(h, 0.0);
  std::vector<double> grad(theta.size());
  std::vector<double> probe = theta;
  for (size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    double up = f(probe);
    probe[i] = theta[i] - h;
    double down = f(probe);
    probe[i] = theta[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// --------------------------- checkpoint I/O --------------------------------

namespace {

constexpr char kMagic[8] = {'F', 'O', 'P', 'O', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutF64(std::string& out, double v) {
  PutU64(out, std::bit_cast<uint64_t>(v));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}
  uint32_t GetU32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(Byte()) << (8 * i);
    return v;
  }
  uint64_t GetU64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(Byte()) << (8 * i);
    return v;
  }
  double GetF64() { return std::bit_cast<double>(GetU64()); }
  void GetRaw(char* dst, size_t n) {
    FOPO_CHECK_LE(pos_ + n, bytes_.size());
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  uint8_t Byte() {
    FOPO_CHECK_LT(pos_, bytes_.size());
    return static_cast<uint8_t>(bytes_[pos_++]);
  }
  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  FOPO_CHECK_EQ(static_cast<int>(ckpt.theta.size()), ParamCount(ckpt.shape));
  if (!ckpt.theta_old.empty()) {
    FOPO_CHECK_EQ(ckpt.theta_old.size(), ckpt.theta.size());
  }
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  PutU32(out, kVersion);
  PutU32(out, ckpt.game_id);
  PutU32(out, ckpt.feature_map_id);
  uint32_t flags = (ckpt.shape.hidden ? 1u : 0u) |
                   (!ckpt.theta_old.empty() ? 2u : 0u);
  PutU32(out, flags);
  PutU32(out, static_cast<uint32_t>(ckpt.shape.input_dim));
  PutU32(out, static_cast<uint32_t>(ckpt.shape.max_actions));
  PutU32(out, static_cast<uint32_t>(ckpt.shape.hidden_dim));
  PutU64(out, static_cast<uint64_t>(ckpt.theta.size()));
  PutU64(out, ckpt.phase);
  PutU64(out, ckpt.rng_state);
  for (double v : ckpt.theta) PutF64(out, v);
  for (double v : ckpt.theta_old) PutF64(out, v);
  return out;
}

Checkpoint DeserializeCheckpoint(const std::string& bytes) {
  Reader r(bytes);
  char magic[8];
  r.GetRaw(magic, sizeof(magic));
  FOPO_CHECK_EQ(std::memcmp(magic, kMagic, sizeof(kMagic)), 0);
  FOPO_CHECK_EQ(r.GetU32(), kVersion);
  Checkpoint ckpt;
  ckpt.game_id = r.GetU32();
  ckpt.feature_map_id = r.GetU32();
  uint32_t flags = r.GetU32();
  ckpt.shape.hidden = (flags & 1u) != 0;
  bool has_old = (flags & 2u) != 0;
  ckpt.shape.input_dim = static_cast<int>(r.GetU32());
  ckpt.shape.max_actions = static_cast<int>(r.GetU32());
  ckpt.shape.hidden_dim = static_cast<int>(r.GetU32());
  uint64_t d = r.GetU64();
  FOPO_CHECK_EQ(static_cast<int>(d), ParamCount(ckpt.shape));
  ckpt.phase = r.GetU64();
  ckpt.rng_state = r.GetU64();
  ckpt.theta.resize(d);
  for (double& v : ckpt.theta) v = r.GetF64();
  if (has_old) {
    ckpt.theta_old.resize(d);
    for (double& v : ckpt.theta_old) v = r.GetF64();
  }
  FOPO_CHECK(r.AtEnd());
  return ckpt;
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  WriteFileOrDie(path, SerializeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::string& path) {
  return DeserializeCheckpoint(ReadFileOrDie(path));
}

}  // namespace fopo
