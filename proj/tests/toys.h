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

// Closed toy environments shared by the unit and acceptance tests.

#ifndef RENAS_TESTS_TOYS_H_
#define RENAS_TESTS_TOYS_H_

#include <cmath>

#include "renas/arch_space.h"
#include "renas/construct_policy.h"
#include "renas/controller.h"
#include "renas/reinforce.h"

namespace renas::toys {

// One-block space; mutating o1 to SEP5 scores 0.9, any other action 0.1.
struct MutationBandit {
  SpaceConfig space{1, 6};
  CellSpec parent = ParseCell("-2,-1,SEP3,MAX3", 6);

  static double Fitness(const MutationTrace& trace) {
    const MutationAction& a = trace.actions.at(0);
    const bool hit = a.target == MutationTarget::kO1 &&
                     std::holds_alternative<Op>(a.replacement) &&
                     std::get<Op>(a.replacement) == Op::kSep5;
    return hit ? 0.9 : 0.1;
  }

  MutationTrace Rewarded() const {
    MutationTrace t;
    t.actions.push_back({1, MutationTarget::kO1, Op::kSep5});
    return t;
  }

  double RewardedProbability(const ControllerParams& p) const {
    return std::exp(TraceLogProb(p, parent, Rewarded()).logprob);
  }

  // Trains from a fresh N(0, 0.01^2) controller; returns the final
  // probability of the rewarded action.
  double Train(std::uint64_t seed, int updates,
               const ControllerConfig& config = {}) const {
    Rng init = MakeStream(seed, 1), rng = MakeStream(seed, 2);
    ControllerTrainer trainer(ControllerParams::Init(space, config, init),
                              RewardConfig{});
    for (int u = 0; u < updates; ++u) {
      const MutationTrace t = SampleMutation(trainer.params(), parent, rng);
      trainer.Update({&parent, &t}, Fitness(t));
    }
    return RewardedProbability(trainer.params());
  }
};

// Sequential construction on a one-block, two-op space (16 cells); the
// cell "-1,-2,SEP5,SEP3" scores 0.9, every other cell scores by how many
// of its fields agree with it.
struct ConstructionBandit {
  SpaceConfig space{1, 2};
  CellSpec best = ParseCell("-1,-2,SEP5,SEP3", 2);

  double Fitness(const CellSpec& c) const {
    if (c == best) return 0.9;
    const BlockSpec& a = c.blocks[0];
    const BlockSpec& b = best.blocks[0];
    const int agree = (a.i1 == b.i1) + (a.i2 == b.i2) + (a.o1 == b.o1) + (a.o2 == b.o2);
    return 0.1 + 0.1 * agree;
  }

  double BestProbability(const ConstructorParams& p) const {
    return std::exp(ForwardConstruction(p, best).score.logprob);
  }

  double Train(std::uint64_t seed, int updates,
               const ControllerConfig& config = {}) const {
    Rng init = MakeStream(seed, 1), rng = MakeStream(seed, 2);
    ConstructionTrainer trainer(ConstructorParams::Init(space, config, init),
                                RewardConfig{});
    for (int u = 0; u < updates; ++u) {
      const CellSpec c = SampleConstruction(trainer.params(), rng).cell;
      trainer.Update(c, Fitness(c));
    }
    return BestProbability(trainer.params());
  }
};

}  // namespace renas::toys

#endif  // RENAS_TESTS_TOYS_H_
