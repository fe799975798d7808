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

// Small neural-network substrate for the mutation controller: embedding
// lookup, LSTM (single layer), bidirectional wrapper, linear heads and
// shaped categorical decisions, each with a hand-written backward pass.

#ifndef RENAS_NN_H_
#define RENAS_NN_H_

#include <span>
#include <string>
#include <vector>

#include "renas/rng.h"
#include "renas/tensor.h"

namespace renas::nn {

// --- Logit shaping and categorical decisions -----------------------------

struct LogitShaping {
  double tanh_constant = 2.5;
  double temperature = 5.0;
};

// out = C * tanh(raw / T), elementwise.
Vec ShapeLogits(std::span<const double> raw, const LogitShaping& s = {});

// Throws std::invalid_argument on non-finite logits.
Vec Softmax(std::span<const double> logits);
double Entropy(std::span<const double> probs);

struct Draw {
  int index = 0;
  double logprob = 0.0;
  double entropy = 0.0;
};

// Samples from softmax(logits). Throws std::invalid_argument on non-finite
// logits.
Draw SoftmaxSample(std::span<const double> logits, Rng& rng);

// Inverse-CDF draw from a probability vector.
int SampleIndex(std::span<const double> probs, Rng& rng);

// One decision: raw scores -> shaped logits -> probabilities.
struct Categorical {
  Vec raw;
  Vec logits;
  Vec probs;
  double entropy = 0.0;

  double LogProb(int k) const;
};

Categorical MakeCategorical(std::span<const double> raw, const LogitShaping& s);

// d/d(raw) of  dlogp * log p[chosen] + dent * entropy.
Vec CategoricalBackward(const Categorical& cat, int chosen, double dlogp,
                        double dent, const LogitShaping& s);

// --- Embedding -----------------------------------------------------------

// Row gather. Throws std::out_of_range for ids outside the table.
std::vector<Vec> Embed(const Tensor2& table, std::span<const int> ids);
void EmbedBackward(std::span<const int> ids, std::span<const Vec> grads,
                   Tensor2& dtable);

// --- Linear --------------------------------------------------------------

// y = W x + b, with b a column vector of W.rows() entries.
Vec Linear(const Tensor2& w, const Tensor2& b, std::span<const double> x);
// Accumulates into dw/db; adds W^T dy into dx when dx is non-empty.
void LinearBackward(const Tensor2& w, std::span<const double> x,
                    std::span<const double> dy, Tensor2& dw, Tensor2& db,
                    std::span<double> dx);

// --- LSTM ----------------------------------------------------------------

// Gate order in the stacked 4H rows: input, forget, candidate, output.
struct LstmParams {
  Tensor2 wx;  // 4H x E
  Tensor2 wh;  // 4H x H
  Tensor2 b;   // 4H x 1

  static LstmParams Zeros(std::size_t input_size, std::size_t hidden_size);
  std::size_t input_size() const { return wx.cols(); }
  std::size_t hidden_size() const { return wh.cols(); }
  bool empty() const { return wx.empty(); }
  void AppendTo(const std::string& prefix, NamedTensors& out);
  void AppendTo(const std::string& prefix, ConstNamedTensors& out) const;
};

struct LstmTape {
  std::vector<Vec> x;      // T inputs
  std::vector<Vec> h;      // T + 1 hidden states, h[0] is the initial state
  std::vector<Vec> c;      // T + 1 cell states
  std::vector<Vec> gates;  // T x 4H activated gates
  std::vector<Vec> tanh_c; // T

  std::size_t steps() const { return x.size(); }
  // Hidden state after consuming input t.
  const Vec& output(std::size_t t) const { return h[t + 1]; }
};

// Empty h0/c0 mean zeros. Throws std::invalid_argument on shape mismatch.
LstmTape LstmForward(const LstmParams& p, std::span<const Vec> inputs,
                     std::span<const double> h0 = {},
                     std::span<const double> c0 = {});

struct LstmInputGrads {
  std::vector<Vec> dx;
  Vec dh0;
  Vec dc0;
};

// Backpropagation through time given dL/dh_t for every output t.
// Parameter gradients are accumulated into `grads`.
LstmInputGrads LstmBackward(const LstmParams& p, const LstmTape& tape,
                            std::span<const Vec> dh, LstmParams& grads);

// --- Bidirectional encoder ----------------------------------------------

struct BidirTape {
  LstmTape fwd;
  LstmTape bwd;  // over the reversed sequence
  std::vector<Vec> outputs;  // position t: [fwd_t ; bwd_t]
};

BidirTape BidirEncode(const LstmParams& fwd, const LstmParams& bwd,
                      std::span<const Vec> inputs,
                      std::span<const double> h0_fwd = {},
                      std::span<const double> h0_bwd = {});

struct BidirInputGrads {
  std::vector<Vec> dx;
  Vec dh0_fwd;
  Vec dh0_bwd;
};

BidirInputGrads BidirBackward(const LstmParams& fwd, const LstmParams& bwd,
                              const BidirTape& tape, std::span<const Vec> dout,
                              LstmParams& dfwd, LstmParams& dbwd);

}  // namespace renas::nn

#endif  // RENAS_NN_H_
