// Copyright 2026 The RENAS Search Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Policy-gradient training of the controllers.
//
// Reward: R = tan(min(f, f_max) * pi/2) + w_H * H(θ), where H is the summed
// entropy of the sampled decisions. With baseline b the update descends
//   J(θ) = -(R(θ) - b) * log p(trace; θ),
// which pushes up the log-probability of above-baseline traces and, through
// the entropy term inside R, raises entropy in proportion to -log p.

#ifndef RENAS_REINFORCE_H_
#define RENAS_REINFORCE_H_

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "renas/adam.h"
#include "renas/controller.h"
#include "renas/tensor.h"

namespace renas {

enum class BaselineKind { kNone, kEma };

struct RewardConfig {
  double entropy_weight = 0.1;
  double fitness_clip = 0.999;
  BaselineKind baseline = BaselineKind::kEma;
  double baseline_decay = 0.95;

  // Throws std::invalid_argument unless 0 < fitness_clip < 1,
  // 0 <= baseline_decay < 1 and entropy_weight >= 0.
  void Check() const;
};

// tan(min(fitness, clip) * pi / 2). Throws std::invalid_argument for
// negative or non-finite fitness.
double ShapedReward(double fitness, double fitness_clip = 0.999);

struct UpdateDiagnostics {
  double fitness = 0.0;
  double reward = 0.0;
  double advantage = 0.0;
  double baseline = 0.0;  // value used for this update
  double logprob = 0.0;
  double entropy = 0.0;
  double grad_norm = 0.0;
};

// Policy requirements:
//   using Params;   // with Tensors() and ZerosLike()
//   using Sample;
//   static Tape Forward(const Params&, const Sample&);  // tape.score.{logprob,entropy}
//   static void Backward(const Params&, const Tape&, double dlogp, double dent,
//                        Params& grads);
template <class Policy>
class PolicyGradientTrainer {
 public:
  using Params = typename Policy::Params;
  using Sample = typename Policy::Sample;

  PolicyGradientTrainer(Params params, RewardConfig reward,
                        nn::AdamConfig adam = {})
      : params_(std::move(params)), reward_(reward), adam_(adam) {
    reward_.Check();
  }

  const Params& params() const { return params_; }
  Params& mutable_params() { return params_; }
  const RewardConfig& reward_config() const { return reward_; }
  double baseline() const { return baseline_; }
  void set_baseline(double b) { baseline_ = b; }
  std::int64_t steps() const { return adam_.steps(); }

  // One REINFORCE step on `sample` scored with `fitness`. Throws
  // std::runtime_error, leaving parameters untouched, if the gradient is
  // not finite.
  UpdateDiagnostics Update(const Sample& sample, double fitness) {
    const auto tape = Policy::Forward(params_, sample);
    UpdateDiagnostics diag;
    diag.fitness = fitness;
    diag.logprob = tape.score.logprob;
    diag.entropy = tape.score.entropy;
    diag.reward = ShapedReward(fitness, reward_.fitness_clip) +
                  reward_.entropy_weight * diag.entropy;
    diag.baseline = reward_.baseline == BaselineKind::kEma ? baseline_ : 0.0;
    diag.advantage = diag.reward - diag.baseline;

    Params grads = params_.ZerosLike();
    Policy::Backward(params_, tape, -diag.advantage, -reward_.entropy_weight,
                     grads);
    diag.grad_norm = std::sqrt(nn::SquaredNorm(std::as_const(grads).Tensors()));
    if (!std::isfinite(diag.grad_norm)) {
      throw std::runtime_error(
          "non-finite policy gradient (reward " + std::to_string(diag.reward) +
          ", logprob " + std::to_string(diag.logprob) + ")");
    }
    adam_.Step(params_.Tensors(), std::as_const(grads).Tensors());
    if (reward_.baseline == BaselineKind::kEma) {
      baseline_ = reward_.baseline_decay * baseline_ +
                  (1.0 - reward_.baseline_decay) * diag.reward;
    }
    return diag;
  }

  // Surrogate J = -advantage * logprob - entropy_weight * entropy, with the
  // advantage held fixed. Its gradient is the negated gradient of the
  // expected reward, the entropy bonus being a function of the parameters.
  static double Surrogate(const Params& params, const Sample& sample,
                          double advantage, double entropy_weight,
                          Params* grads = nullptr) {
    const auto tape = Policy::Forward(params, sample);
    if (grads != nullptr) {
      Policy::Backward(params, tape, -advantage, -entropy_weight, *grads);
    }
    return -advantage * tape.score.logprob - entropy_weight * tape.score.entropy;
  }

 private:
  Params params_;
  RewardConfig reward_;
  nn::Adam adam_;
  double baseline_ = 0.0;
};

struct MutationSample {
  const CellSpec* parent = nullptr;
  const MutationTrace* trace = nullptr;
};

struct MutationPolicy {
  using Params = ControllerParams;
  using Sample = MutationSample;

  static TraceTape Forward(const Params& p, const Sample& s) {
    return ForwardTrace(p, *s.parent, *s.trace);
  }
  static void Backward(const Params& p, const TraceTape& tape, double dlogp,
                       double dent, Params& grads) {
    BackwardTrace(p, tape, dlogp, dent, grads);
  }
};

using ControllerTrainer = PolicyGradientTrainer<MutationPolicy>;

}  // namespace renas

#endif  // RENAS_REINFORCE_H_
