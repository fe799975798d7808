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

#include "renas/controller.h"

#include <stdexcept>

namespace renas {

namespace {

constexpr int kNumTargets = 4;
constexpr std::array<std::string_view, kNumTargets> kTargetNames = {"i1", "i2",
                                                                    "o1", "o2"};

std::span<const double> Head(const nn::Tensor2& w, std::size_t begin,
                             std::size_t len) {
  return w.row(0).subspan(begin, len);
}

void AddScaled(std::span<double> dst, double a, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += a * src[i];
}

const nn::Vec& CandidateState(const CellEncoding& enc, int block, int index) {
  if (index < block - 1) return enc.at(index + 1, Slot::kCombiner);
  return index == block - 1 ? enc.begin_prev1 : enc.begin_prev2;
}

nn::Categorical RouterDecision(const ControllerParams& p,
                               const CellEncoding& enc, int block) {
  std::array<double, kNumTargets> raw{};
  for (int k = 0; k < kNumTargets; ++k) {
    raw[k] = nn::Dot(p.router_w.row(0), enc.at(block, static_cast<Slot>(k))) +
             p.router_b[0];
  }
  return nn::MakeCategorical(raw, p.config.shaping);
}

nn::Categorical ReplaceDecision(const ControllerParams& p,
                                const CellEncoding& enc, int block,
                                MutationTarget target) {
  const nn::Vec& h_id = enc.at(block, static_cast<Slot>(target));
  if (IsInputTarget(target)) {
    const std::size_t d = h_id.size();
    const double own = nn::Dot(Head(p.input_w, 0, d), h_id) + p.input_b[0];
    nn::Vec raw(NumInputChoices(block));
    for (int j = 0; j < static_cast<int>(raw.size()); ++j) {
      raw[j] = own + nn::Dot(Head(p.input_w, d, d), CandidateState(enc, block, j));
    }
    return nn::MakeCategorical(raw, p.config.shaping);
  }
  return nn::MakeCategorical(nn::Linear(p.op_w, p.op_b, h_id), p.config.shaping);
}

int ReplacementIndex(const MutationAction& a) {
  if (IsInputTarget(a.target)) {
    return InputCandidateIndex(a.block, std::get<InputRef>(a.replacement));
  }
  return static_cast<int>(std::get<Op>(a.replacement));
}

}  // namespace

ControllerParams ControllerParams::Zeros(const SpaceConfig& space,
                                         const ControllerConfig& config) {
  space.Check();
  if (config.embed_size < 1 || config.hidden_size < 1) {
    throw std::invalid_argument("controller sizes must be positive");
  }
  ControllerParams p;
  p.space = space;
  p.config = config;
  const auto e = static_cast<std::size_t>(config.embed_size);
  const auto h = static_cast<std::size_t>(config.hidden_size);
  const auto d = static_cast<std::size_t>(p.state_width());
  p.embedding = nn::Tensor2(VocabSize(space.num_blocks), e);
  p.fwd = nn::LstmParams::Zeros(e, h);
  if (config.bidirectional) p.bwd = nn::LstmParams::Zeros(e, h);
  p.begin_prev1 = nn::Tensor2(d, 1);
  p.begin_prev2 = nn::Tensor2(d, 1);
  p.router_w = nn::Tensor2(1, d);
  p.router_b = nn::Tensor2(1, 1);
  p.input_w = nn::Tensor2(1, 2 * d);
  p.input_b = nn::Tensor2(1, 1);
  p.op_w = nn::Tensor2(space.num_ops, d);
  p.op_b = nn::Tensor2(space.num_ops, 1);
  return p;
}

ControllerParams ControllerParams::Init(const SpaceConfig& space,
                                        const ControllerConfig& config,
                                        Rng& rng) {
  ControllerParams p = Zeros(space, config);
  for (auto& [name, t] : p.Tensors()) t->FillNormal(config.init_stddev, rng);
  return p;
}

int ControllerParams::state_width() const {
  return config.bidirectional ? 2 * config.hidden_size : config.hidden_size;
}

ControllerParams ControllerParams::ZerosLike() const {
  return Zeros(space, config);
}

nn::NamedTensors ControllerParams::Tensors() {
  nn::NamedTensors out;
  out.emplace_back("embedding", &embedding);
  fwd.AppendTo("enc_fwd", out);
  if (config.bidirectional) bwd.AppendTo("enc_bwd", out);
  out.emplace_back("begin_prev1", &begin_prev1);
  out.emplace_back("begin_prev2", &begin_prev2);
  out.emplace_back("router.w", &router_w);
  out.emplace_back("router.b", &router_b);
  out.emplace_back("input_mut.w", &input_w);
  out.emplace_back("input_mut.b", &input_b);
  out.emplace_back("op_mut.w", &op_w);
  out.emplace_back("op_mut.b", &op_b);
  return out;
}

nn::ConstNamedTensors ControllerParams::Tensors() const {
  nn::ConstNamedTensors out;
  for (auto& [name, t] : const_cast<ControllerParams*>(this)->Tensors()) {
    out.emplace_back(name, t);
  }
  return out;
}

ControllerParams UnidirectionalVariant(const ControllerParams& params) {
  if (!params.config.bidirectional) return params;
  ControllerConfig cfg = params.config;
  cfg.bidirectional = false;
  ControllerParams uni = ControllerParams::Zeros(params.space, cfg);
  const auto h = static_cast<std::size_t>(cfg.hidden_size);
  const auto d = static_cast<std::size_t>(params.state_width());
  uni.embedding = params.embedding;
  uni.fwd = params.fwd;
  for (std::size_t i = 0; i < h; ++i) {
    uni.begin_prev1[i] = params.begin_prev1[i];
    uni.begin_prev2[i] = params.begin_prev2[i];
    uni.router_w[i] = params.router_w[i];
    uni.input_w[i] = params.input_w[i];
    uni.input_w[h + i] = params.input_w[d + i];
  }
  uni.router_b = params.router_b;
  uni.input_b = params.input_b;
  for (std::size_t r = 0; r < params.op_w.rows(); ++r) {
    for (std::size_t i = 0; i < h; ++i) uni.op_w(r, i) = params.op_w(r, i);
  }
  uni.op_b = params.op_b;
  return uni;
}

std::string_view TargetName(MutationTarget t) {
  return kTargetNames[static_cast<int>(t)];
}

std::optional<MutationTarget> ParseTarget(std::string_view name) {
  for (int k = 0; k < kNumTargets; ++k) {
    if (kTargetNames[k] == name) return static_cast<MutationTarget>(k);
  }
  return std::nullopt;
}

InputRef InputCandidate(int block, int index) {
  if (index < 0 || index > block) {
    throw std::out_of_range("input candidate index out of range");
  }
  if (index < block - 1) return InputRef::Block(index + 1);
  return index == block - 1 ? InputRef::Prev1() : InputRef::Prev2();
}

int InputCandidateIndex(int block, InputRef ref) {
  if (!IsLegalInput(ref, block)) {
    throw std::invalid_argument("input " + std::to_string(ref.value()) +
                                " not legal in block " + std::to_string(block));
  }
  if (ref.is_block()) return ref.value() - 1;
  return ref == InputRef::Prev1() ? block - 1 : block;
}

CellEncoding EncodeCell(const ControllerParams& params, const CellSpec& cell) {
  if (auto v = Validate(cell, params.space)) {
    throw std::invalid_argument("cannot encode cell: " + v->message);
  }
  CellEncoding enc;
  enc.tokens = EncodeTokens(cell);
  enc.embedded = nn::Embed(params.embedding, enc.tokens);
  const auto begin1 = params.begin_prev1.flat();
  enc.begin_prev1.assign(begin1.begin(), begin1.end());
  const auto begin2 = params.begin_prev2.flat();
  enc.begin_prev2.assign(begin2.begin(), begin2.end());
  const auto h = static_cast<std::size_t>(params.config.hidden_size);
  if (params.config.bidirectional) {
    enc.bidir = nn::BidirEncode(params.fwd, params.bwd, enc.embedded,
                                begin1.subspan(0, h), begin1.subspan(h, h));
    enc.states = enc.bidir.outputs;
  } else {
    enc.bidir.fwd = nn::LstmForward(params.fwd, enc.embedded, begin1);
    enc.states.assign(enc.bidir.fwd.h.begin() + 1, enc.bidir.fwd.h.end());
  }
  return enc;
}

MutationTrace SampleMutation(const ControllerParams& params,
                             const CellSpec& cell, Rng& rng) {
  const CellEncoding enc = EncodeCell(params, cell);
  MutationTrace trace;
  for (int b = 1; b <= cell.num_blocks(); ++b) {
    MutationAction a;
    a.block = b;
    const nn::Categorical router = RouterDecision(params, enc, b);
    const int t = nn::SampleIndex(router.probs, rng);
    a.target = static_cast<MutationTarget>(t);
    a.router_logprob = router.LogProb(t);
    a.router_entropy = router.entropy;
    const nn::Categorical replace = ReplaceDecision(params, enc, b, a.target);
    const int r = nn::SampleIndex(replace.probs, rng);
    if (IsInputTarget(a.target)) {
      a.replacement = InputCandidate(b, r);
    } else {
      a.replacement = static_cast<Op>(r);
    }
    a.replace_logprob = replace.LogProb(r);
    a.replace_entropy = replace.entropy;
    trace.total_logprob += a.router_logprob;
    trace.total_logprob += a.replace_logprob;
    trace.total_entropy += a.router_entropy;
    trace.total_entropy += a.replace_entropy;
    trace.actions.push_back(a);
  }
  return trace;
}

std::optional<std::string> CheckTrace(const CellSpec& cell,
                                      const MutationTrace& trace) {
  if (trace.actions.size() != cell.blocks.size()) {
    return "trace has " + std::to_string(trace.actions.size()) +
           " actions for a " + std::to_string(cell.num_blocks()) + "-block cell";
  }
  for (std::size_t i = 0; i < trace.actions.size(); ++i) {
    const MutationAction& a = trace.actions[i];
    const int b = static_cast<int>(i) + 1;
    if (a.block != b) return "action " + std::to_string(b) + " names block " + std::to_string(a.block);
    if (IsInputTarget(a.target)) {
      const auto* ref = std::get_if<InputRef>(&a.replacement);
      if (ref == nullptr) return "block " + std::to_string(b) + ": input target with op replacement";
      if (!IsLegalInput(*ref, b)) return "block " + std::to_string(b) + ": illegal input " + std::to_string(ref->value());
    } else {
      const auto* op = std::get_if<Op>(&a.replacement);
      if (op == nullptr) return "block " + std::to_string(b) + ": op target with input replacement";
      const int code = static_cast<int>(*op);
      if (code < 0 || code >= cell.num_ops) return "block " + std::to_string(b) + ": op code " + std::to_string(code) + " outside active set";
    }
  }
  return std::nullopt;
}

CellSpec ApplyMutation(const CellSpec& cell, const MutationTrace& trace) {
  if (auto err = CheckTrace(cell, trace)) {
    throw std::invalid_argument("illegal mutation: " + *err);
  }
  CellSpec child = cell;
  for (const MutationAction& a : trace.actions) {
    BlockSpec& blk = child.blocks[a.block - 1];
    switch (a.target) {
      case MutationTarget::kI1: blk.i1 = std::get<InputRef>(a.replacement); break;
      case MutationTarget::kI2: blk.i2 = std::get<InputRef>(a.replacement); break;
      case MutationTarget::kO1: blk.o1 = std::get<Op>(a.replacement); break;
      case MutationTarget::kO2: blk.o2 = std::get<Op>(a.replacement); break;
    }
  }
  return child;
}

TraceTape ForwardTrace(const ControllerParams& params, const CellSpec& cell,
                       const MutationTrace& trace) {
  if (auto err = CheckTrace(cell, trace)) {
    throw std::invalid_argument("illegal trace: " + *err);
  }
  TraceTape tape;
  tape.encoding = EncodeCell(params, cell);
  for (const MutationAction& a : trace.actions) {
    const int t = static_cast<int>(a.target);
    const int r = ReplacementIndex(a);
    nn::Categorical router = RouterDecision(params, tape.encoding, a.block);
    nn::Categorical replace =
        ReplaceDecision(params, tape.encoding, a.block, a.target);
    tape.score.logprob += router.LogProb(t);
    tape.score.logprob += replace.LogProb(r);
    tape.score.entropy += router.entropy;
    tape.score.entropy += replace.entropy;
    tape.router.push_back(std::move(router));
    tape.replace.push_back(std::move(replace));
    tape.router_choice.push_back(t);
    tape.replace_choice.push_back(r);
  }
  return tape;
}

void BackwardTrace(const ControllerParams& params, const TraceTape& tape,
                   double dlogp, double dent, ControllerParams& grads) {
  const CellEncoding& enc = tape.encoding;
  const auto d = static_cast<std::size_t>(params.state_width());
  const auto h = static_cast<std::size_t>(params.config.hidden_size);
  const nn::LogitShaping& shaping = params.config.shaping;
  std::vector<nn::Vec> dstates(enc.states.size(), nn::Vec(d, 0.0));
  nn::Vec dbegin1(d, 0.0), dbegin2(d, 0.0);
  const auto state_grad = [&](int block, Slot slot) -> nn::Vec& {
    return dstates[kTokensPerBlock * (block - 1) + static_cast<int>(slot)];
  };

  for (std::size_t i = 0; i < tape.router.size(); ++i) {
    const int b = static_cast<int>(i) + 1;
    const nn::Vec draw = nn::CategoricalBackward(
        tape.router[i], tape.router_choice[i], dlogp, dent, shaping);
    for (int k = 0; k < kNumTargets; ++k) {
      AddScaled(grads.router_w.row(0), draw[k], enc.at(b, static_cast<Slot>(k)));
      grads.router_b[0] += draw[k];
      AddScaled(state_grad(b, static_cast<Slot>(k)), draw[k], params.router_w.row(0));
    }

    const auto target = static_cast<MutationTarget>(tape.router_choice[i]);
    const Slot id_slot = static_cast<Slot>(target);
    const nn::Vec& h_id = enc.at(b, id_slot);
    const nn::Vec drep = nn::CategoricalBackward(
        tape.replace[i], tape.replace_choice[i], dlogp, dent, shaping);
    if (IsInputTarget(target)) {
      auto gw = grads.input_w.row(0);
      for (int j = 0; j < static_cast<int>(drep.size()); ++j) {
        const double g = drep[j];
        AddScaled(gw.subspan(0, d), g, h_id);
        AddScaled(gw.subspan(d, d), g, CandidateState(enc, b, j));
        grads.input_b[0] += g;
        AddScaled(state_grad(b, id_slot), g, Head(params.input_w, 0, d));
        nn::Vec& dcand = j < b - 1 ? state_grad(j + 1, Slot::kCombiner)
                                   : (j == b - 1 ? dbegin1 : dbegin2);
        AddScaled(dcand, g, Head(params.input_w, d, d));
      }
    } else {
      nn::LinearBackward(params.op_w, h_id, drep, grads.op_w, grads.op_b,
                         state_grad(b, id_slot));
    }
  }

  if (params.config.bidirectional) {
    const nn::BidirInputGrads g = nn::BidirBackward(
        params.fwd, params.bwd, enc.bidir, dstates, grads.fwd, grads.bwd);
    nn::EmbedBackward(enc.tokens, g.dx, grads.embedding);
    for (std::size_t k = 0; k < h; ++k) {
      dbegin1[k] += g.dh0_fwd[k];
      dbegin1[h + k] += g.dh0_bwd[k];
    }
  } else {
    const nn::LstmInputGrads g =
        nn::LstmBackward(params.fwd, enc.bidir.fwd, dstates, grads.fwd);
    nn::EmbedBackward(enc.tokens, g.dx, grads.embedding);
    for (std::size_t k = 0; k < h; ++k) dbegin1[k] += g.dh0[k];
  }
  for (std::size_t k = 0; k < d; ++k) {
    grads.begin_prev1[k] += dbegin1[k];
    grads.begin_prev2[k] += dbegin2[k];
  }
}

TraceScore TraceLogProb(const ControllerParams& params, const CellSpec& cell,
                        const MutationTrace& trace, ControllerParams* grads) {
  const TraceTape tape = ForwardTrace(params, cell, trace);
  if (grads != nullptr) BackwardTrace(params, tape, 1.0, 0.0, *grads);
  return tape.score;
}

}  // namespace renas
