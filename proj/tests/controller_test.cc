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

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "renas/gradcheck.h"

namespace renas {
namespace {

ControllerConfig Tiny(bool bidirectional = true, double stddev = 0.5) {
  ControllerConfig c;
  c.embed_size = 4;
  c.hidden_size = 4;
  c.bidirectional = bidirectional;
  c.init_stddev = stddev;
  return c;
}

int TokenDiff(const CellSpec& a, const CellSpec& b) {
  const auto ta = EncodeTokens(a), tb = EncodeTokens(b);
  int d = 0;
  for (std::size_t k = 0; k < ta.size(); ++k) d += ta[k] != tb[k];
  return d;
}

double MaxEntropy(const CellSpec& cell) {
  double bound = 0.0;
  for (int b = 1; b <= cell.num_blocks(); ++b) {
    bound += std::log(4.0) + std::log(std::max(NumInputChoices(b), cell.num_ops));
  }
  return bound;
}

class ControllerTest : public ::testing::TestWithParam<bool> {};

TEST(ControllerEncodingTest, OneBlockHasFivePositionalStates) {
  Rng rng(1);
  const SpaceConfig space{1, 6};
  const auto p = ControllerParams::Init(space, ControllerConfig{}, rng);
  const CellEncoding enc = EncodeCell(p, RandomCell(space, rng));
  EXPECT_EQ(enc.states.size(), 5u);
  for (const auto& s : enc.states) EXPECT_EQ(s.size(), 200u);
  EXPECT_EQ(enc.begin_prev1.size(), 200u);
  EXPECT_EQ(enc.begin_prev2.size(), 200u);
  EXPECT_EQ(p.state_width(), 200);
}

TEST(ControllerEncodingTest, ZeroParamsGiveZeroStates) {
  Rng rng(2);
  const SpaceConfig space{3, 6};
  const auto p = ControllerParams::Zeros(space, ControllerConfig{});
  const CellEncoding enc = EncodeCell(p, RandomCell(space, rng));
  for (const auto& s : enc.states) {
    for (double v : s) EXPECT_EQ(v, 0.0);
  }
}

TEST(ControllerEncodingTest, OneTokenChangeReachesEveryPosition) {
  Rng rng(3);
  const SpaceConfig space{3, 6};
  const auto p = ControllerParams::Init(space, Tiny(), rng);
  CellSpec a = RandomCell(space, rng);
  CellSpec b = a;
  b.blocks[1].o1 = static_cast<Op>((static_cast<int>(a.blocks[1].o1) + 1) % 6);
  const CellEncoding ea = EncodeCell(p, a), eb = EncodeCell(p, b);
  for (std::size_t t = 0; t < ea.states.size(); ++t) {
    EXPECT_NE(ea.states[t], eb.states[t]) << "position " << t;
  }
}

TEST(ControllerEncodingTest, RejectsInvalidCell) {
  Rng rng(4);
  const SpaceConfig space{2, 6};
  const auto p = ControllerParams::Init(space, Tiny(), rng);
  EXPECT_THROW(EncodeCell(p, RandomCell(SpaceConfig{3, 6}, rng)), std::invalid_argument);
}

TEST(ControllerCandidatesTest, OrderIsEarlierBlocksThenPreviousCells) {
  EXPECT_EQ(InputCandidate(1, 0), InputRef::Prev1());
  EXPECT_EQ(InputCandidate(1, 1), InputRef::Prev2());
  EXPECT_EQ(InputCandidate(3, 0), InputRef::Block(1));
  EXPECT_EQ(InputCandidate(3, 1), InputRef::Block(2));
  EXPECT_EQ(InputCandidate(3, 2), InputRef::Prev1());
  EXPECT_EQ(InputCandidate(3, 3), InputRef::Prev2());
  for (int b = 1; b <= 5; ++b) {
    for (int k = 0; k <= b; ++k) EXPECT_EQ(InputCandidateIndex(b, InputCandidate(b, k)), k);
  }
}

TEST(ControllerSamplingTest, FirstBlockInputIsBinaryChoice) {
  Rng rng(5);
  const SpaceConfig space{3, 6};
  const auto p = ControllerParams::Init(space, Tiny(), rng);
  int seen = 0;
  for (int t = 0; t < 2000; ++t) {
    const CellSpec cell = RandomCell(space, rng);
    const MutationTrace tr = SampleMutation(p, cell, rng);
    const MutationAction& a = tr.actions[0];
    if (!IsInputTarget(a.target)) continue;
    ++seen;
    EXPECT_LT(std::get<InputRef>(a.replacement).value(), 0);
    EXPECT_LE(a.replace_entropy, std::log(2.0) + 1e-12);
  }
  EXPECT_GT(seen, 500);
}

TEST(ControllerSamplingTest, UniformRouterPicksTargetsEvenly) {
  Rng rng(6);
  const SpaceConfig space{1, 6};
  const auto p = ControllerParams::Zeros(space, Tiny());
  const CellSpec cell = RandomCell(space, rng);
  std::array<double, 4> counts{};
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    counts[static_cast<int>(SampleMutation(p, cell, rng).actions[0].target)] += 1;
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  EXPECT_LT(chi2, 11.345);
}

TEST_P(ControllerTest, SampledTracesAreLegal) {
  Rng rng(7);
  const SpaceConfig space{4, 5};
  for (int t = 0; t < 2000; ++t) {
    const auto p = ControllerParams::Init(space, Tiny(GetParam(), 1.0), rng);
    const CellSpec cell = RandomCell(space, rng);
    const MutationTrace tr = SampleMutation(p, cell, rng);
    ASSERT_EQ(tr.actions.size(), 4u);
    ASSERT_EQ(tr.num_decisions(), 8);
    ASSERT_FALSE(CheckTrace(cell, tr));
    const CellSpec child = ApplyMutation(cell, tr);
    ASSERT_FALSE(Validate(child, space));
    ASSERT_LE(TokenDiff(cell, child), 4);
    ASSERT_EQ(DecodeTokens(EncodeTokens(child), space), child);
    double lp = 0.0, ent = 0.0;
    for (const auto& a : tr.actions) {
      lp += a.router_logprob + a.replace_logprob;
      ent += a.router_entropy + a.replace_entropy;
    }
    ASSERT_NEAR(tr.total_logprob, lp, 1e-12);
    ASSERT_NEAR(tr.total_entropy, ent, 1e-12);
    ASSERT_LE(tr.total_entropy, MaxEntropy(cell) + 1e-9);
  }
}

TEST_P(ControllerTest, RecomputedLogProbMatchesSample) {
  Rng rng(8);
  const SpaceConfig space{5, 6};
  for (int t = 0; t < 200; ++t) {
    const auto p = ControllerParams::Init(space, Tiny(GetParam(), 1.0), rng);
    const CellSpec cell = RandomCell(space, rng);
    const MutationTrace tr = SampleMutation(p, cell, rng);
    const TraceScore s = TraceLogProb(p, cell, tr);
    ASSERT_NEAR(s.logprob, tr.total_logprob, 1e-9);
    ASSERT_NEAR(s.entropy, tr.total_entropy, 1e-9);
  }
}

TEST_P(ControllerTest, ShapedLogitsBoundProbabilityRatios) {
  Rng rng(9);
  const SpaceConfig space{3, 6};
  for (int t = 0; t < 200; ++t) {
    const auto p = ControllerParams::Init(space, Tiny(GetParam(), 50.0), rng);
    const CellSpec cell = RandomCell(space, rng);
    const TraceTape tape = ForwardTrace(p, cell, SampleMutation(p, cell, rng));
    for (const auto* group : {&tape.router, &tape.replace}) {
      for (const nn::Categorical& c : *group) {
        const auto [lo, hi] = std::minmax_element(c.probs.begin(), c.probs.end());
        ASSERT_LE(*hi / *lo, std::exp(5.0) * (1 + 1e-12));
      }
    }
  }
}

TEST_P(ControllerTest, LogProbAndEntropyGradientsMatchFiniteDifferences) {
  Rng rng(10);
  const SpaceConfig space{2, 6};
  for (int trial = 0; trial < 5; ++trial) {
    ControllerParams p = ControllerParams::Init(space, Tiny(GetParam()), rng);
    const CellSpec cell = RandomCell(space, rng);
    const MutationTrace tr = SampleMutation(p, cell, rng);
    const double a = 0.8, c = -0.6;
    ControllerParams g = p.ZerosLike();
    BackwardTrace(p, ForwardTrace(p, cell, tr), a, c, g);
    const auto f = [&] {
      const TraceScore s = TraceLogProb(p, cell, tr);
      return a * s.logprob + c * s.entropy;
    };
    const auto res = nn::Gradcheck(f, p.Tensors(), std::as_const(g).Tensors());
    EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
  }
}

TEST_P(ControllerTest, TraceLogProbGradientIsLogProbGradient) {
  Rng rng(11);
  const SpaceConfig space{2, 3};
  ControllerParams p = ControllerParams::Init(space, Tiny(GetParam()), rng);
  const CellSpec cell = RandomCell(space, rng);
  const MutationTrace tr = SampleMutation(p, cell, rng);
  ControllerParams g = p.ZerosLike();
  TraceLogProb(p, cell, tr, &g);
  const auto res = nn::Gradcheck([&] { return TraceLogProb(p, cell, tr).logprob; },
                                 p.Tensors(), std::as_const(g).Tensors());
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

INSTANTIATE_TEST_SUITE_P(Directions, ControllerTest, ::testing::Values(true, false),
                         [](const auto& info) { return info.param ? "Bidirectional" : "Forward"; });

TEST(ControllerVariantTest, UnidirectionalKeepsForwardHalf) {
  Rng rng(12);
  const SpaceConfig space{3, 4};
  const auto p = ControllerParams::Init(space, Tiny(), rng);
  const auto u = UnidirectionalVariant(p);
  EXPECT_EQ(u.state_width(), 4);
  EXPECT_TRUE(u.bwd.empty());
  EXPECT_EQ(u.fwd.wx, p.fwd.wx);
  EXPECT_EQ(u.op_w.cols(), 4u);
  EXPECT_EQ(u.input_w.cols(), 8u);
  EXPECT_EQ(u.op_w(1, 2), p.op_w(1, 2));
  const CellSpec cell = RandomCell(space, rng);
  const MutationTrace tr = SampleMutation(u, cell, rng);
  EXPECT_FALSE(CheckTrace(cell, tr));
}

TEST(ControllerApplyTest, SameOpReplacementIsNoOp) {
  const CellSpec parent = ParseCell("-2,-1,SEP3,IDENT|1,-1,MAX3,SEP5", 6);
  MutationTrace tr;
  tr.actions.push_back({1, MutationTarget::kI2, InputRef::Prev1()});
  tr.actions.push_back({2, MutationTarget::kO1, Op::kMax3});
  EXPECT_EQ(ApplyMutation(parent, tr), parent);
}

TEST(ControllerApplyTest, EditsOneFieldPerBlock) {
  const CellSpec parent = ParseCell("-2,-1,SEP3,IDENT|1,-1,MAX3,SEP5", 6);
  MutationTrace tr;
  tr.actions.push_back({1, MutationTarget::kO2, Op::kSep7});
  tr.actions.push_back({2, MutationTarget::kI1, InputRef::Prev2()});
  EXPECT_EQ(ToText(ApplyMutation(parent, tr)), "-2,-1,SEP3,SEP7|-2,-1,MAX3,SEP5");
}

TEST(ControllerApplyTest, RejectsIllegalTraces) {
  const CellSpec parent = ParseCell("-2,-1,SEP3,IDENT|1,-1,MAX3,SEP5", 6);
  MutationTrace forward_ref;
  forward_ref.actions.push_back({1, MutationTarget::kI1, InputRef::Block(1)});
  forward_ref.actions.push_back({2, MutationTarget::kO1, Op::kMax3});
  EXPECT_TRUE(CheckTrace(parent, forward_ref));
  EXPECT_THROW(ApplyMutation(parent, forward_ref), std::invalid_argument);

  MutationTrace kind_mismatch;
  kind_mismatch.actions.push_back({1, MutationTarget::kO1, InputRef::Prev1()});
  kind_mismatch.actions.push_back({2, MutationTarget::kO1, Op::kMax3});
  EXPECT_THROW(ApplyMutation(parent, kind_mismatch), std::invalid_argument);

  MutationTrace short_trace;
  short_trace.actions.push_back({1, MutationTarget::kO1, Op::kSep5});
  EXPECT_THROW(ApplyMutation(parent, short_trace), std::invalid_argument);
}

}  // namespace
}  // namespace renas
