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

// Tournament-selection evolution: sample #S members, breed the best with a
// (reinforced or random) mutation, evaluate the child with inherited
// maturity, and replace the worst of the sample with it.

#ifndef RENAS_EVOLUTION_H_
#define RENAS_EVOLUTION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "renas/arch_space.h"
#include "renas/controller.h"
#include "renas/evaluators.h"
#include "renas/reinforce.h"
#include "renas/rng.h"

namespace renas {

struct Individual {
  std::int64_t id = 0;
  std::optional<std::int64_t> parent_id;
  std::int64_t birth_step = 0;  // 0 for the initial population
  CellSpec cell;
  double fitness = 0.0;  // observed
  double maturity = 0.0;
  double true_fitness = 0.0;  // oracle hook, never used for selection
};

struct Population {
  int capacity = 20;
  std::vector<Individual> members;
  std::vector<Individual> history;  // every evaluated individual, in order
  std::int64_t next_id = 0;
};

// Proposes one mutation per block for a parent, and optionally learns from
// the child's fitness.
class Mutator {
 public:
  virtual ~Mutator() = default;
  virtual MutationTrace Propose(const CellSpec& parent, Rng& rng) = 0;
  virtual std::optional<UpdateDiagnostics> Learn(const CellSpec& parent,
                                                 const MutationTrace& trace,
                                                 double fitness) {
    (void)parent, (void)trace, (void)fitness;
    return std::nullopt;
  }
};

// The reinforced mutation controller with its trainer.
class ControllerMutator final : public Mutator {
 public:
  explicit ControllerMutator(ControllerTrainer trainer)
      : trainer_(std::move(trainer)) {}

  MutationTrace Propose(const CellSpec& parent, Rng& rng) override;
  std::optional<UpdateDiagnostics> Learn(const CellSpec& parent,
                                         const MutationTrace& trace,
                                         double fitness) override;
  const ControllerTrainer& trainer() const { return trainer_; }

 private:
  ControllerTrainer trainer_;
};

// Per block: target uniform over {i1, i2, o1, o2}, replacement uniform over
// the target's legal values. Log-probabilities are those of that policy.
class RandomMutator final : public Mutator {
 public:
  MutationTrace Propose(const CellSpec& parent, Rng& rng) override;
};

// Replays recorded traces in order. Throws std::out_of_range when exhausted.
class ReplayMutator final : public Mutator {
 public:
  explicit ReplayMutator(std::vector<MutationTrace> traces)
      : traces_(std::move(traces)) {}
  MutationTrace Propose(const CellSpec& parent, Rng& rng) override;

 private:
  std::vector<MutationTrace> traces_;
  std::size_t next_ = 0;
};

struct EvolutionConfig {
  int population_size = 20;
  int sample_size = 5;
  // Throws std::invalid_argument unless 2 <= sample_size <= population_size.
  void Check() const;
};

// Separate streams so that, for one seed, the initial population and the
// selection/noise sequences do not depend on how mutations are proposed.
struct EvolutionStreams {
  Rng init;
  Rng select;
  Rng mutate;
  Rng noise;

  static EvolutionStreams FromSeed(std::uint64_t seed);
};

using EvaluationObserver =
    std::function<void(const Population&, const Individual&)>;

// #P random cells evaluated at the model's initial maturity.
Population Initialize(const FitnessOracle& oracle, const MaturityModel& model,
                      int population_size, Rng& init, Rng& noise,
                      const EvaluationObserver& observer = {});

struct StepRecord {
  std::int64_t step = 0;
  std::vector<std::int64_t> sampled_ids;
  std::int64_t parent_id = 0;
  double parent_fitness = 0.0;
  MutationTrace trace;
  Individual child;
  std::int64_t removed_id = 0;
  double removed_fitness = 0.0;
  std::optional<UpdateDiagnostics> diagnostics;
};

// Ties: the lower id wins the best slot, the higher id loses the worst.
// Throws std::invalid_argument for sample sizes outside [2, |members|].
StepRecord EvolutionStep(Population& pop, Mutator& mutator,
                         const FitnessOracle& oracle,
                         const MaturityModel& model, int sample_size,
                         std::int64_t step, Rng& select, Rng& mutate,
                         Rng& noise);

struct RunResult {
  Population population;
  std::vector<StepRecord> steps;
  // Members re-evaluated from scratch at full maturity after the last step.
  std::vector<double> retrained_fitness;
  std::size_t best_by_retrained = 0;
  std::size_t best_by_true = 0;
};

// Initializes and runs `steps` evolution steps; observer sees every
// evaluation (initial members included).
RunResult RunEvolution(const FitnessOracle& oracle, const MaturityModel& model,
                       const EvolutionConfig& config, std::int64_t steps,
                       Mutator& mutator, EvolutionStreams& streams,
                       const EvaluationObserver& observer = {});

}  // namespace renas

#endif  // RENAS_EVOLUTION_H_
