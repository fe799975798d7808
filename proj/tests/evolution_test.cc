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

#include "renas/evolution.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <set>

namespace renas {
namespace {

const Individual& ById(const std::vector<Individual>& members, std::int64_t id) {
  auto it = std::find_if(members.begin(), members.end(),
                         [id](const Individual& m) { return m.id == id; });
  EXPECT_NE(it, members.end());
  return *it;
}

double ChiSquaredP(const std::vector<int>& counts) {
  double total = 0.0;
  for (int c : counts) total += c;
  const double expect = total / counts.size();
  double stat = 0.0;
  for (int c : counts) stat += (c - expect) * (c - expect) / expect;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

class EvolutionContractTest : public ::testing::TestWithParam<bool> {};

// Every step is checked against a snapshot of the population taken before it.
TEST_P(EvolutionContractTest, TournamentStepsKeepContracts) {
  const SpaceConfig space{2, 3};
  const auto oracle = TabularOracle::Build(space, 3);
  MaturityModel model;
  model.noise_sigma = 0.0;
  const int pop_size = 12, sample = 4;
  auto streams = EvolutionStreams::FromSeed(17);
  Population pop = Initialize(oracle, model, pop_size, streams.init, streams.noise);

  RandomMutator random;
  ControllerConfig cc;
  cc.hidden_size = cc.embed_size = 6;
  Rng init = MakeStream(17, 9);
  ControllerMutator learned(ControllerTrainer(ControllerParams::Init(space, cc, init), RewardConfig{}));
  Mutator& mutator = GetParam() ? static_cast<Mutator&>(learned) : random;

  const int steps = GetParam() ? 1500 : 10000;
  double best = -1.0;
  for (const auto& m : pop.members) best = std::max(best, m.fitness);
  for (int s = 1; s <= steps; ++s) {
    const std::vector<Individual> before = pop.members;
    const std::size_t history_before = pop.history.size();
    const StepRecord r = EvolutionStep(pop, mutator, oracle, model, sample, s,
                                       streams.select, streams.mutate, streams.noise);
    ASSERT_EQ(pop.members.size(), static_cast<std::size_t>(pop_size));
    ASSERT_EQ(pop.history.size(), history_before + 1);
    ASSERT_EQ(r.sampled_ids.size(), static_cast<std::size_t>(sample));
    ASSERT_EQ(std::set<std::int64_t>(r.sampled_ids.begin(), r.sampled_ids.end()).size(),
              r.sampled_ids.size());

    // Best of sample: highest fitness, lowest id among ties.
    const Individual* top = nullptr;
    const Individual* bottom = nullptr;
    for (std::int64_t id : r.sampled_ids) {
      const Individual& m = ById(before, id);
      if (!top || m.fitness > top->fitness || (m.fitness == top->fitness && m.id < top->id)) top = &m;
      if (!bottom || m.fitness < bottom->fitness ||
          (m.fitness == bottom->fitness && m.id > bottom->id)) {
        bottom = &m;
      }
    }
    ASSERT_EQ(r.parent_id, top->id);
    ASSERT_EQ(r.parent_fitness, top->fitness);
    ASSERT_EQ(r.child.parent_id, top->id);
    ASSERT_EQ(r.removed_id, bottom->id);
    ASSERT_EQ(r.removed_fitness, bottom->fitness);
    ASSERT_NE(r.parent_id, r.removed_id);

    // Push-pop: the child is added, the removed member is gone, others intact.
    std::set<std::int64_t> expect;
    for (const auto& m : before) if (m.id != r.removed_id) expect.insert(m.id);
    expect.insert(r.child.id);
    std::set<std::int64_t> got;
    for (const auto& m : pop.members) got.insert(m.id);
    ASSERT_EQ(got, expect);
    ASSERT_EQ(pop.history.back().id, r.child.id);
    ASSERT_EQ(r.child.birth_step, s);
    ASSERT_FALSE(Validate(r.child.cell, space).has_value());
    ASSERT_EQ(r.child.cell, ApplyMutation(top->cell, r.trace));
    ASSERT_EQ(r.diagnostics.has_value(), GetParam());

    double now = -1.0;
    for (const auto& m : pop.members) now = std::max(now, m.fitness);
    ASSERT_GE(now, best);
    best = now;
  }
}

INSTANTIATE_TEST_SUITE_P(Mutators, EvolutionContractTest, ::testing::Bool(),
                         [](const auto& info) { return info.param ? "Controller" : "Random"; });

TEST(EvolutionTest, TiesResolvedById) {
  const SpaceConfig space{1, 2};
  const TabularOracle oracle(space, 0, std::vector<double>(16, 0.5));
  MaturityModel model;
  model.noise_sigma = 0.0;
  auto streams = EvolutionStreams::FromSeed(1);
  Population pop = Initialize(oracle, model, 6, streams.init, streams.noise);
  RandomMutator mutator;
  // Children at maturity below 1 score under every initial member.
  const StepRecord r = EvolutionStep(pop, mutator, oracle, model, 6, 1, streams.select,
                                     streams.mutate, streams.noise);
  EXPECT_EQ(r.parent_id, 0);
  EXPECT_EQ(r.removed_id, 5);
}

TEST(EvolutionTest, RejectsBadSampleSizes) {
  EvolutionConfig c;
  c.sample_size = 1;
  EXPECT_THROW(c.Check(), std::invalid_argument);
  c.sample_size = 21;
  EXPECT_THROW(c.Check(), std::invalid_argument);
  c.sample_size = 20;
  EXPECT_NO_THROW(c.Check());

  const auto oracle = TabularOracle::Build(SpaceConfig{1, 2}, 0);
  const MaturityModel model;
  auto streams = EvolutionStreams::FromSeed(1);
  Population pop = Initialize(oracle, model, 4, streams.init, streams.noise);
  RandomMutator mutator;
  EXPECT_THROW(EvolutionStep(pop, mutator, oracle, model, 5, 1, streams.select, streams.mutate,
                             streams.noise),
               std::invalid_argument);
}

TEST(RandomMutatorTest, TargetsAndReplacementsAreUniform) {
  const CellSpec parent = ParseCell("-2,-1,SEP3,IDENT|1,-1,MAX3,SEP5|2,1,AVG3,SEP7", 6);
  RandomMutator mutator;
  Rng rng(5);
  std::vector<int> targets(4, 0);
  std::vector<int> block3_inputs(4, 0), ops(6, 0);
  for (int t = 0; t < 100000; ++t) {
    const MutationTrace trace = mutator.Propose(parent, rng);
    ASSERT_EQ(trace.actions.size(), 3u);
    ASSERT_FALSE(CheckTrace(parent, trace).has_value());
    ASSERT_FALSE(Validate(ApplyMutation(parent, trace), SpaceConfig{3, 6}).has_value());
    ++targets[static_cast<int>(trace.actions[0].target)];
    const MutationAction& a = trace.actions[2];
    if (IsInputTarget(a.target)) {
      ++block3_inputs[InputCandidateIndex(3, std::get<InputRef>(a.replacement))];
    } else {
      ++ops[static_cast<int>(std::get<Op>(a.replacement))];
    }
  }
  EXPECT_GT(ChiSquaredP(targets), 0.01);
  EXPECT_GT(ChiSquaredP(block3_inputs), 0.01);
  EXPECT_GT(ChiSquaredP(ops), 0.01);
}

TEST(RandomMutatorTest, LogProbMatchesUniformPolicy) {
  const CellSpec parent = ParseCell("-2,-1,SEP3,AVG3|1,-1,SEP7,SEP5", 4);
  RandomMutator mutator;
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const MutationTrace trace = mutator.Propose(parent, rng);
    double lp = 0.0;
    for (const auto& a : trace.actions) {
      const int n = IsInputTarget(a.target) ? a.block + 1 : 4;
      lp += -std::log(4.0) - std::log(static_cast<double>(n));
    }
    EXPECT_NEAR(trace.total_logprob, lp, 1e-12);
  }
}

TEST(EvolutionTest, InitialPopulationDoesNotDependOnMutator) {
  const SpaceConfig space{3, 4};
  const auto oracle = TabularOracle::Build(space, 0);
  const MaturityModel model;
  EvolutionConfig config;
  RandomMutator random;
  ControllerConfig cc;
  cc.hidden_size = cc.embed_size = 8;
  Rng init = MakeStream(4, 9);
  ControllerMutator learned(ControllerTrainer(ControllerParams::Init(space, cc, init), RewardConfig{}));

  auto s1 = EvolutionStreams::FromSeed(4), s2 = EvolutionStreams::FromSeed(4);
  const RunResult a = RunEvolution(oracle, model, config, 30, random, s1);
  const RunResult b = RunEvolution(oracle, model, config, 30, learned, s2);
  for (int i = 0; i < config.population_size; ++i) {
    EXPECT_EQ(a.population.history[i].cell, b.population.history[i].cell);
    EXPECT_EQ(a.population.history[i].fitness, b.population.history[i].fitness);
  }
  // Same sampled subsets at step 1; selection stream is shared.
  EXPECT_EQ(a.steps[0].sampled_ids, b.steps[0].sampled_ids);
}

TEST(EvolutionTest, ReplayReproducesRun) {
  const SpaceConfig space{3, 4};
  const auto oracle = TabularOracle::Build(space, 2);
  const MaturityModel model;
  const EvolutionConfig config;
  ControllerConfig cc;
  cc.hidden_size = cc.embed_size = 8;
  Rng init = MakeStream(8, 9);
  ControllerMutator learned(ControllerTrainer(ControllerParams::Init(space, cc, init), RewardConfig{}));
  auto s1 = EvolutionStreams::FromSeed(8);
  int observed = 0;
  const RunResult run = RunEvolution(oracle, model, config, 200, learned, s1,
                                     [&](const Population&, const Individual&) { ++observed; });
  EXPECT_EQ(observed, 220);
  EXPECT_EQ(run.steps.size(), 200u);
  EXPECT_EQ(run.retrained_fitness.size(), 20u);

  std::vector<MutationTrace> traces;
  for (const auto& s : run.steps) traces.push_back(s.trace);
  ReplayMutator replay(traces);
  auto s2 = EvolutionStreams::FromSeed(8);
  const RunResult again = RunEvolution(oracle, model, config, 200, replay, s2);
  ASSERT_EQ(again.population.members.size(), run.population.members.size());
  for (std::size_t i = 0; i < run.population.members.size(); ++i) {
    EXPECT_EQ(again.population.members[i].id, run.population.members[i].id);
    EXPECT_EQ(again.population.members[i].fitness, run.population.members[i].fitness);
  }
  EXPECT_EQ(again.retrained_fitness, run.retrained_fitness);
  EXPECT_THROW(replay.Propose(run.steps[0].child.cell, s2.mutate), std::out_of_range);
}

TEST(EvolutionTest, RetrainedFinalistsUseFullMaturity) {
  const SpaceConfig space{2, 3};
  const auto oracle = TabularOracle::Build(space, 1);
  MaturityModel model;
  model.noise_sigma = 0.0;
  const EvolutionConfig config;
  RandomMutator mutator;
  auto streams = EvolutionStreams::FromSeed(3);
  const RunResult run = RunEvolution(oracle, model, config, 50, mutator, streams);
  for (std::size_t i = 0; i < run.population.members.size(); ++i) {
    EXPECT_DOUBLE_EQ(run.retrained_fitness[i],
                     oracle.TrueFitness(run.population.members[i].cell) * model.Factor(1.0));
  }
  EXPECT_EQ(*std::max_element(run.retrained_fitness.begin(), run.retrained_fitness.end()),
            run.retrained_fitness[run.best_by_retrained]);
}

}  // namespace
}  // namespace renas
