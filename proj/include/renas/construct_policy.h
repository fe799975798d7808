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

// Baseline policy that builds a cell from scratch: a unidirectional LSTM
// emits i1, i2, o1, o2 for every block in turn, each decision a shaped
// softmax over that field's legal values, fed back as the next input.

#ifndef RENAS_CONSTRUCT_POLICY_H_
#define RENAS_CONSTRUCT_POLICY_H_

#include <vector>

#include "renas/arch_space.h"
#include "renas/controller.h"
#include "renas/nn.h"
#include "renas/reinforce.h"

namespace renas {

struct ConstructorParams {
  SpaceConfig space;
  ControllerConfig config;  // `bidirectional` is ignored

  nn::Tensor2 embedding;  // (vocab + 1) x E; the extra row is the start token
  nn::LstmParams lstm;
  nn::Tensor2 input_w;    // (#B + 1) x H, row j scores input token j
  nn::Tensor2 input_b;
  nn::Tensor2 op_w;       // num_ops x H
  nn::Tensor2 op_b;

  static ConstructorParams Zeros(const SpaceConfig& space,
                                 const ControllerConfig& config);
  static ConstructorParams Init(const SpaceConfig& space,
                                const ControllerConfig& config, Rng& rng);
  ConstructorParams ZerosLike() const { return Zeros(space, config); }
  nn::NamedTensors Tensors();
  nn::ConstNamedTensors Tensors() const;
};

inline int StartToken(int num_blocks) { return VocabSize(num_blocks); }

struct ConstructionSample {
  CellSpec cell;
  int num_decisions = 0;
  double logprob = 0.0;
  double entropy = 0.0;
};

ConstructionSample SampleConstruction(const ConstructorParams& params, Rng& rng);

struct ConstructionTape {
  std::vector<int> input_tokens;  // start token, then each decision but the last
  nn::LstmTape lstm;
  std::vector<nn::Categorical> decisions;
  std::vector<int> choices;
  TraceScore score;
};

// Teacher-forced replay of the decisions that build `cell`. Throws
// std::invalid_argument for cells outside params.space.
ConstructionTape ForwardConstruction(const ConstructorParams& params,
                                     const CellSpec& cell);
void BackwardConstruction(const ConstructorParams& params,
                          const ConstructionTape& tape, double dlogp,
                          double dent, ConstructorParams& grads);

struct ConstructionPolicy {
  using Params = ConstructorParams;
  using Sample = CellSpec;

  static ConstructionTape Forward(const Params& p, const Sample& cell) {
    return ForwardConstruction(p, cell);
  }
  static void Backward(const Params& p, const ConstructionTape& tape,
                       double dlogp, double dent, Params& grads) {
    BackwardConstruction(p, tape, dlogp, dent, grads);
  }
};

using ConstructionTrainer = PolicyGradientTrainer<ConstructionPolicy>;

}  // namespace renas

#endif  // RENAS_CONSTRUCT_POLICY_H_
