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

#include "renas/construct_policy.h"

#include <array>
#include <stdexcept>

namespace renas {

namespace {

constexpr int kFieldsPerBlock = 4;

// Raw scores of decision `field` (0..3) of 1-based block `block`.
nn::Vec DecisionScores(const ConstructorParams& p, int block, int field,
                       std::span<const double> h) {
  if (field < 2) {
    nn::Vec raw(NumInputChoices(block));
    for (std::size_t j = 0; j < raw.size(); ++j) {
      raw[j] = nn::Dot(p.input_w.row(j), h) + p.input_b[j];
    }
    return raw;
  }
  return nn::Linear(p.op_w, p.op_b, h);
}

int ChoiceToken(int field, int choice, int num_blocks) {
  return field < 2 ? choice : OpToken(static_cast<Op>(choice), num_blocks);
}

void SetField(BlockSpec& blk, int field, int choice) {
  const InputRef ref = choice < 2 ? InputRef::FromValue(choice - 2)
                                  : InputRef::Block(choice - 1);
  switch (field) {
    case 0: blk.i1 = ref; break;
    case 1: blk.i2 = ref; break;
    case 2: blk.o1 = static_cast<Op>(choice); break;
    default: blk.o2 = static_cast<Op>(choice); break;
  }
}

}  // namespace

ConstructorParams ConstructorParams::Zeros(const SpaceConfig& space,
                                           const ControllerConfig& config) {
  space.Check();
  ConstructorParams p;
  p.space = space;
  p.config = config;
  const auto e = static_cast<std::size_t>(config.embed_size);
  const auto h = static_cast<std::size_t>(config.hidden_size);
  p.embedding = nn::Tensor2(VocabSize(space.num_blocks) + 1, e);
  p.lstm = nn::LstmParams::Zeros(e, h);
  p.input_w = nn::Tensor2(space.num_blocks + 1, h);
  p.input_b = nn::Tensor2(space.num_blocks + 1, 1);
  p.op_w = nn::Tensor2(space.num_ops, h);
  p.op_b = nn::Tensor2(space.num_ops, 1);
  return p;
}

ConstructorParams ConstructorParams::Init(const SpaceConfig& space,
                                          const ControllerConfig& config,
                                          Rng& rng) {
  ConstructorParams p = Zeros(space, config);
  for (auto& [name, t] : p.Tensors()) t->FillNormal(config.init_stddev, rng);
  return p;
}

nn::NamedTensors ConstructorParams::Tensors() {
  nn::NamedTensors out;
  out.emplace_back("embedding", &embedding);
  lstm.AppendTo("lstm", out);
  out.emplace_back("input_head.w", &input_w);
  out.emplace_back("input_head.b", &input_b);
  out.emplace_back("op_head.w", &op_w);
  out.emplace_back("op_head.b", &op_b);
  return out;
}

nn::ConstNamedTensors ConstructorParams::Tensors() const {
  nn::ConstNamedTensors out;
  for (auto& [name, t] : const_cast<ConstructorParams*>(this)->Tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

ConstructionSample SampleConstruction(const ConstructorParams& params, Rng& rng) {
  const int nb = params.space.num_blocks;
  ConstructionSample out;
  out.cell.num_ops = params.space.num_ops;
  out.cell.blocks.resize(nb);
  nn::Vec h, c;
  int token = StartToken(nb);
  for (int b = 1; b <= nb; ++b) {
    for (int field = 0; field < kFieldsPerBlock; ++field) {
      const std::vector<nn::Vec> x = nn::Embed(params.embedding, std::span(&token, 1));
      const nn::LstmTape step = nn::LstmForward(params.lstm, x, h, c);
      h = step.h[1];
      c = step.c[1];
      const nn::Categorical cat = nn::MakeCategorical(
          DecisionScores(params, b, field, h), params.config.shaping);
      const int choice = nn::SampleIndex(cat.probs, rng);
      out.logprob += cat.LogProb(choice);
      out.entropy += cat.entropy;
      ++out.num_decisions;
      SetField(out.cell.blocks[b - 1], field, choice);
      token = ChoiceToken(field, choice, nb);
    }
  }
  return out;
}

ConstructionTape ForwardConstruction(const ConstructorParams& params,
                                     const CellSpec& cell) {
  if (auto v = Validate(cell, params.space)) {
    throw std::invalid_argument("cannot score construction: " + v->message);
  }
  const int nb = cell.num_blocks();
  ConstructionTape tape;
  tape.input_tokens.push_back(StartToken(nb));
  for (int b = 1; b <= nb; ++b) {
    const BlockSpec& blk = cell.blocks[b - 1];
    const std::array<int, kFieldsPerBlock> choices = {
        InputToken(blk.i1), InputToken(blk.i2), static_cast<int>(blk.o1),
        static_cast<int>(blk.o2)};
    for (int field = 0; field < kFieldsPerBlock; ++field) {
      tape.choices.push_back(choices[field]);
      tape.input_tokens.push_back(ChoiceToken(field, choices[field], nb));
    }
  }
  tape.input_tokens.pop_back();
  const std::vector<nn::Vec> x = nn::Embed(params.embedding, tape.input_tokens);
  tape.lstm = nn::LstmForward(params.lstm, x);
  for (std::size_t t = 0; t < tape.choices.size(); ++t) {
    const int b = static_cast<int>(t) / kFieldsPerBlock + 1;
    const int field = static_cast<int>(t) % kFieldsPerBlock;
    nn::Categorical cat = nn::MakeCategorical(
        DecisionScores(params, b, field, tape.lstm.output(t)),
        params.config.shaping);
    tape.score.logprob += cat.LogProb(tape.choices[t]);
    tape.score.entropy += cat.entropy;
    tape.decisions.push_back(std::move(cat));
  }
  return tape;
}

void BackwardConstruction(const ConstructorParams& params,
                          const ConstructionTape& tape, double dlogp,
                          double dent, ConstructorParams& grads) {
  const std::size_t steps = tape.choices.size();
  const auto hs = params.lstm.hidden_size();
  std::vector<nn::Vec> dh(steps, nn::Vec(hs, 0.0));
  for (std::size_t t = 0; t < steps; ++t) {
    const int b = static_cast<int>(t) / kFieldsPerBlock + 1;
    const int field = static_cast<int>(t) % kFieldsPerBlock;
    const nn::Vec draw = nn::CategoricalBackward(
        tape.decisions[t], tape.choices[t], dlogp, dent, params.config.shaping);
    const nn::Vec& h = tape.lstm.output(t);
    if (field < 2) {
      for (int j = 0; j <= b; ++j) {
        auto gw = grads.input_w.row(j);
        for (std::size_t k = 0; k < hs; ++k) gw[k] += draw[j] * h[k];
        grads.input_b[j] += draw[j];
        const auto w = params.input_w.row(j);
        for (std::size_t k = 0; k < hs; ++k) dh[t][k] += draw[j] * w[k];
      }
    } else {
      nn::LinearBackward(params.op_w, h, draw, grads.op_w, grads.op_b, dh[t]);
    }
  }
  const nn::LstmInputGrads g =
      nn::LstmBackward(params.lstm, tape.lstm, dh, grads.lstm);
  nn::EmbedBackward(tape.input_tokens, g.dx, grads.embedding);
}

}  // namespace renas
