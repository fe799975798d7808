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

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace renas {

MutationTrace ControllerMutator::Propose(const CellSpec& parent, Rng& rng) {
  return SampleMutation(trainer_.params(), parent, rng);
}

std::optional<UpdateDiagnostics> ControllerMutator::Learn(
    const CellSpec& parent, const MutationTrace& trace, double fitness) {
  return trainer_.Update(MutationSample{&parent, &trace}, fitness);
}

MutationTrace RandomMutator::Propose(const CellSpec& parent, Rng& rng) {
  MutationTrace trace;
  for (int b = 1; b <= parent.num_blocks(); ++b) {
    MutationAction a;
    a.block = b;
    a.target = static_cast<MutationTarget>(UniformIndex(rng, 4));
    int choices = 0;
    if (IsInputTarget(a.target)) {
      choices = NumInputChoices(b);
      a.replacement = InputCandidate(b, UniformIndex(rng, choices));
    } else {
      choices = parent.num_ops;
      a.replacement = static_cast<Op>(UniformIndex(rng, choices));
    }
    a.router_logprob = -std::log(4.0);
    a.router_entropy = std::log(4.0);
    a.replace_logprob = -std::log(static_cast<double>(choices));
    a.replace_entropy = std::log(static_cast<double>(choices));
    trace.total_logprob += a.router_logprob;
    trace.total_logprob += a.replace_logprob;
    trace.total_entropy += a.router_entropy;
    trace.total_entropy += a.replace_entropy;
    trace.actions.push_back(a);
  }
  return trace;
}

MutationTrace ReplayMutator::Propose(const CellSpec& /*parent*/, Rng& /*rng*/) {
  if (next_ >= traces_.size()) {
    throw std::out_of_range("replay log has no more mutation traces");
  }
  return traces_[next_++];
}

void EvolutionConfig::Check() const {
  if (population_size < 2) {
    throw std::invalid_argument("population size must be >= 2");
  }
  if (sample_size < 2 || sample_size > population_size) {
    throw std::invalid_argument("sample size must lie in [2, population size]");
  }
}

EvolutionStreams EvolutionStreams::FromSeed(std::uint64_t seed) {
  return EvolutionStreams{MakeStream(seed, 1), MakeStream(seed, 2),
                          MakeStream(seed, 3), MakeStream(seed, 4)};
}

Population Initialize(const FitnessOracle& oracle, const MaturityModel& model,
                      int population_size, Rng& init, Rng& noise,
                      const EvaluationObserver& observer) {
  if (population_size < 2) {
    throw std::invalid_argument("population size must be >= 2");
  }
  Population pop;
  pop.capacity = population_size;
  for (int k = 0; k < population_size; ++k) {
    Individual ind;
    ind.id = pop.next_id++;
    ind.cell = RandomCell(oracle.space(), init);
    ind.maturity = model.initial_maturity;
    ind.fitness = Evaluate(oracle, model, ind.cell, ind.maturity, noise);
    ind.true_fitness = oracle.TrueFitness(ind.cell);
    pop.members.push_back(ind);
    pop.history.push_back(ind);
    if (observer) observer(pop, ind);
  }
  return pop;
}

StepRecord EvolutionStep(Population& pop, Mutator& mutator,
                         const FitnessOracle& oracle,
                         const MaturityModel& model, int sample_size,
                         std::int64_t step, Rng& select, Rng& mutate,
                         Rng& noise) {
  const int n = static_cast<int>(pop.members.size());
  if (sample_size < 2 || sample_size > n) {
    throw std::invalid_argument("sample size " + std::to_string(sample_size) +
                                " outside [2, " + std::to_string(n) + "]");
  }
  // Partial Fisher-Yates: the first sample_size slots are the sample.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < sample_size; ++k) {
    std::swap(order[k], order[k + UniformIndex(select, n - k)]);
  }

  StepRecord rec;
  rec.step = step;
  int best = order[0];
  int worst = order[0];
  for (int k = 0; k < sample_size; ++k) {
    const Individual& c = pop.members[order[k]];
    rec.sampled_ids.push_back(c.id);
    const Individual& b = pop.members[best];
    const Individual& w = pop.members[worst];
    if (c.fitness > b.fitness || (c.fitness == b.fitness && c.id < b.id)) best = order[k];
    if (c.fitness < w.fitness || (c.fitness == w.fitness && c.id > w.id)) worst = order[k];
  }
  const Individual parent = pop.members[best];
  rec.parent_id = parent.id;
  rec.parent_fitness = parent.fitness;
  rec.removed_id = pop.members[worst].id;
  rec.removed_fitness = pop.members[worst].fitness;

  rec.trace = mutator.Propose(parent.cell, mutate);
  Individual child;
  child.id = pop.next_id++;
  child.parent_id = parent.id;
  child.birth_step = step;
  child.cell = ApplyMutation(parent.cell, rec.trace);
  child.maturity = model.Inherit(parent.maturity, parent.cell, child.cell);
  child.fitness = Evaluate(oracle, model, child.cell, child.maturity, noise);
  child.true_fitness = oracle.TrueFitness(child.cell);
  rec.child = child;

  pop.members.erase(pop.members.begin() + worst);
  pop.members.push_back(child);
  pop.history.push_back(child);
  rec.diagnostics = mutator.Learn(parent.cell, rec.trace, child.fitness);
  return rec;
}

RunResult RunEvolution(const FitnessOracle& oracle, const MaturityModel& model,
                       const EvolutionConfig& config, std::int64_t steps,
                       Mutator& mutator, EvolutionStreams& streams,
                       const EvaluationObserver& observer) {
  config.Check();
  model.Check();
  if (steps < 0) throw std::invalid_argument("step budget must be >= 0");
  RunResult result;
  result.population = Initialize(oracle, model, config.population_size,
                                 streams.init, streams.noise, observer);
  Population& pop = result.population;
  result.steps.reserve(steps);
  for (std::int64_t s = 1; s <= steps; ++s) {
    result.steps.push_back(EvolutionStep(pop, mutator, oracle, model,
                                         config.sample_size, s, streams.select,
                                         streams.mutate, streams.noise));
    if (observer) observer(pop, result.steps.back().child);
  }

  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    result.retrained_fitness.push_back(
        Evaluate(oracle, model, pop.members[i].cell, 1.0, streams.noise));
    const auto& m = pop.members;
    const double r = result.retrained_fitness[i];
    const double rb = result.retrained_fitness[result.best_by_retrained];
    if (r > rb || (r == rb && m[i].id < m[result.best_by_retrained].id)) {
      result.best_by_retrained = i;
    }
    if (m[i].true_fitness > m[result.best_by_true].true_fitness) {
      result.best_by_true = i;
    }
  }
  return result;
}

}  // namespace renas
