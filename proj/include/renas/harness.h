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

// Experiment runner: single strategy runs, the seeds x strategies
// comparison grid, its CSV/JSON reports, and replay of logged runs.

#ifndef RENAS_HARNESS_H_
#define RENAS_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "renas/adam.h"
#include "renas/arch_space.h"
#include "renas/controller.h"
#include "renas/evaluators.h"
#include "renas/evolution.h"
#include "renas/reinforce.h"
#include "renas/run_log.h"
#include "renas/stats.h"

namespace renas {

enum class Strategy { kRenas, kRenasNonBi, kEaRandom, kRlConstruct, kRandom };

std::string_view StrategyName(Strategy s);
std::optional<Strategy> ParseStrategy(std::string_view name);
std::vector<Strategy> AllStrategies();
constexpr bool IsEvolutionary(Strategy s) {
  return s == Strategy::kRenas || s == Strategy::kRenasNonBi ||
         s == Strategy::kEaRandom;
}

enum class OracleKind { kTabular, kLandscape };

struct OracleSpec {
  OracleKind kind = OracleKind::kTabular;
  std::uint64_t seed = 0;
  LandscapeParams landscape;
  // Saved tabular oracle to load instead of building one.
  std::string path;
};

struct StrategyConfig {
  Strategy strategy = Strategy::kRenas;
  SpaceConfig space{3, 4};
  OracleSpec oracle;
  EvolutionConfig evolution;
  // Total fitness evaluations, initial population included.
  std::int64_t budget = 1500;
  MaturityModel maturity;
  RewardConfig reward;
  ControllerConfig controller;
  nn::AdamConfig adam;
  double target_fraction = 0.99;

  // Throws std::invalid_argument on inconsistent settings.
  void Check() const;
};

Json ToJson(const StrategyConfig& cfg);
// Throws std::runtime_error on malformed input.
StrategyConfig ConfigFromJson(const Json& j);

// Throws std::invalid_argument / std::runtime_error on bad specs or files.
std::unique_ptr<FitnessOracle> MakeOracle(const SpaceConfig& space,
                                          const OracleSpec& spec,
                                          Execution exec = Execution::kParallel);

struct EvalPoint {
  std::int64_t index = 0;  // 1-based evaluation count
  std::string cell;
  double observed = 0.0;
  double true_fitness = 0.0;
  double maturity = 0.0;
  double best_true = 0.0;  // best true fitness so far
  double pop_mean = 0.0;   // true fitness over the population
  double pop_var = 0.0;
};

struct RunSummary {
  Strategy strategy = Strategy::kRenas;
  std::uint64_t seed = 0;
  std::vector<EvalPoint> points;  // length = budget
  double target = 0.0;
  // First evaluation reaching the target; budget + 1 when never reached.
  std::int64_t evals_to_target = 0;
  bool reached = false;
  std::vector<double> final_fitness;  // population (evolution) or last window
  double wall_seconds = 0.0;
};

// One run. `trace`, when given, receives a header, one record per
// evaluation or step, and a final record.
RunSummary RunStrategy(const StrategyConfig& cfg, std::uint64_t seed,
                       const FitnessOracle& oracle,
                       JsonlWriter* trace = nullptr);

struct StrategyReport {
  Strategy strategy = Strategy::kRenas;
  std::vector<double> evals_to_target;  // per seed
  int reached = 0;
  double median = 0.0;
  stats::Interval median_ci;
};

struct SpeedupReport {
  Strategy other = Strategy::kEaRandom;
  double ratio = 0.0;  // median(other) / median(renas)
  stats::Interval ci;
  stats::RankSumResult rank_sum;  // renas smaller than other
};

struct CompareConfig {
  StrategyConfig base;
  std::vector<Strategy> strategies;
  std::vector<std::uint64_t> seeds;
  Execution execution = Execution::kParallel;
  int bootstrap_resamples = 2000;
  double ci_level = 0.95;
  std::uint64_t bootstrap_seed = 12345;
  // Per-run trace files <dir>/<strategy>-seed<seed>.jsonl when set.
  std::optional<std::filesystem::path> trace_dir;
};

struct CompareReport {
  double optimum = 0.0;
  double target = 0.0;
  std::vector<RunSummary> runs;  // strategy-major, seeds in order
  std::vector<StrategyReport> strategies;
  std::vector<SpeedupReport> speedups;  // only when renas is in the grid
};

CompareReport Compare(const CompareConfig& cfg, const FitnessOracle& oracle);

void WriteRunsCsv(std::ostream& out, const std::vector<RunSummary>& runs);
Json SummaryJson(const CompareConfig& cfg, const CompareReport& report);
Json SummaryJson(const StrategyConfig& cfg, const RunSummary& run);

struct ReplayReport {
  bool match = false;
  std::int64_t evaluations = 0;
  std::int64_t mismatches = 0;
  std::string message;
};

// Re-runs a logged trace and compares every observed fitness and the final
// population bit for bit. Throws std::runtime_error on unreadable logs.
ReplayReport Replay(const std::filesystem::path& trace_path);

}  // namespace renas

#endif  // RENAS_HARNESS_H_
