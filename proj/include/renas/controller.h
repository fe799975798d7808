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

// Reinforced mutation controller. A parent cell's 5#B tokens are embedded
// and encoded by a (bi)directional LSTM; per block, a router picks which of
// i1/i2/o1/o2 to edit, then an input mutator (attention over earlier block
// outputs and the two begin states) or an op mutator picks the replacement.

#ifndef RENAS_CONTROLLER_H_
#define RENAS_CONTROLLER_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "renas/arch_space.h"
#include "renas/nn.h"
#include "renas/rng.h"
#include "renas/tensor.h"

namespace renas {

struct ControllerConfig {
  int embed_size = 100;
  int hidden_size = 100;
  bool bidirectional = true;
  double init_stddev = 0.01;
  nn::LogitShaping shaping;
};

struct ControllerParams {
  SpaceConfig space;
  ControllerConfig config;

  nn::Tensor2 embedding;  // vocab x E
  nn::LstmParams fwd;
  nn::LstmParams bwd;     // empty when unidirectional
  // Learned begin states H^{c-1}, H^{c-2}, width D of the encoder output.
  // H^{c-1} also seeds the encoder's initial hidden state.
  nn::Tensor2 begin_prev1;
  nn::Tensor2 begin_prev2;
  nn::Tensor2 router_w;  // 1 x D, shared over the four field states
  nn::Tensor2 router_b;  // 1 x 1
  nn::Tensor2 input_w;   // 1 x 2D, scores [H_ID ; candidate]
  nn::Tensor2 input_b;   // 1 x 1
  nn::Tensor2 op_w;      // num_ops x D
  nn::Tensor2 op_b;      // num_ops x 1

  static ControllerParams Zeros(const SpaceConfig& space,
                                const ControllerConfig& config);
  // Every entry drawn from N(0, init_stddev^2).
  static ControllerParams Init(const SpaceConfig& space,
                               const ControllerConfig& config, Rng& rng);

  int state_width() const;
  ControllerParams ZerosLike() const;
  nn::NamedTensors Tensors();
  nn::ConstNamedTensors Tensors() const;
};

// Forward-only copy of a bidirectional controller: the backward LSTM is
// dropped and every head keeps the columns that read the forward half.
ControllerParams UnidirectionalVariant(const ControllerParams& params);

enum class Slot { kI1 = 0, kI2 = 1, kO1 = 2, kO2 = 3, kCombiner = 4 };
enum class MutationTarget { kI1 = 0, kI2 = 1, kO1 = 2, kO2 = 3 };

std::string_view TargetName(MutationTarget t);
std::optional<MutationTarget> ParseTarget(std::string_view name);
constexpr bool IsInputTarget(MutationTarget t) {
  return t == MutationTarget::kI1 || t == MutationTarget::kI2;
}

struct CellEncoding {
  std::vector<nn::Vec> states;  // one per token, width D
  nn::Vec begin_prev1;
  nn::Vec begin_prev2;

  const nn::Vec& at(int block, Slot slot) const {
    return states[kTokensPerBlock * (block - 1) + static_cast<int>(slot)];
  }

  // Forward tape.
  std::vector<int> tokens;
  std::vector<nn::Vec> embedded;
  nn::BidirTape bidir;  // fwd only is filled when unidirectional
};

// Throws std::invalid_argument for a cell that does not fit params.space.
CellEncoding EncodeCell(const ControllerParams& params, const CellSpec& cell);

using Replacement = std::variant<InputRef, Op>;

struct MutationAction {
  int block = 1;
  MutationTarget target = MutationTarget::kO1;
  Replacement replacement = Op::kSep3;
  double router_logprob = 0.0;
  double replace_logprob = 0.0;
  double router_entropy = 0.0;
  double replace_entropy = 0.0;

  friend bool operator==(const MutationAction&, const MutationAction&) = default;
};

struct MutationTrace {
  std::vector<MutationAction> actions;  // one per block, in block order
  double total_logprob = 0.0;
  double total_entropy = 0.0;

  int num_decisions() const { return 2 * static_cast<int>(actions.size()); }
  friend bool operator==(const MutationTrace&, const MutationTrace&) = default;
};

// Candidate order for the input mutator of block b:
//   [block 1 .. block b-1, prev1, prev2]  (b + 1 entries).
InputRef InputCandidate(int block, int index);
int InputCandidateIndex(int block, InputRef ref);

// Samples one action per block from a single encoding of `cell`.
MutationTrace SampleMutation(const ControllerParams& params,
                             const CellSpec& cell, Rng& rng);

// Reason the trace cannot be applied to `cell`, or nullopt if it is legal.
std::optional<std::string> CheckTrace(const CellSpec& cell,
                                      const MutationTrace& trace);
// Throws std::invalid_argument on an illegal trace.
CellSpec ApplyMutation(const CellSpec& cell, const MutationTrace& trace);

struct TraceScore {
  double logprob = 0.0;
  double entropy = 0.0;
};

// Everything needed to backpropagate a recorded trace.
struct TraceTape {
  CellEncoding encoding;
  std::vector<nn::Categorical> router;
  std::vector<nn::Categorical> replace;
  std::vector<int> router_choice;
  std::vector<int> replace_choice;
  TraceScore score;
};

// Throws std::invalid_argument on an illegal trace.
TraceTape ForwardTrace(const ControllerParams& params, const CellSpec& cell,
                       const MutationTrace& trace);
// Accumulates d/dθ [dlogp * logprob + dent * entropy] into `grads`.
void BackwardTrace(const ControllerParams& params, const TraceTape& tape,
                   double dlogp, double dent, ControllerParams& grads);

// Log-probability and entropy of `trace` under `params`. When `grads` is
// given, d(logprob)/dθ is accumulated into it.
TraceScore TraceLogProb(const ControllerParams& params, const CellSpec& cell,
                        const MutationTrace& trace,
                        ControllerParams* grads = nullptr);

}  // namespace renas

#endif  // RENAS_CONTROLLER_H_
