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

// renas: search, compare, oracle build/export and replay.

#include <omp.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "renas/evaluators.h"
#include "renas/harness.h"
#include "renas/run_log.h"

namespace fs = std::filesystem;

namespace {

struct Options {
  int blocks = 3;
  int ops = 4;
  int pop = 20;
  int sample = 5;
  std::int64_t budget = 1500;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  int num_seeds = 0;
  std::string strategy = "renas";
  std::vector<std::string> strategies;
  std::string oracle = "tabular";
  std::uint64_t oracle_seed = 0;
  double landscape_scale = renas::LandscapeParams{}.scale;
  double noise = 0.01;
  std::string baseline = "ema";
  double entropy_weight = 0.1;
  double target_fraction = 0.99;
  int hidden = 100;
  int embed = 100;
  std::string out = "out";
  int threads = 0;
  bool serial = false;
  std::string oracle_file;
  std::string csv;
  std::string log;
};

renas::StrategyConfig MakeConfig(const Options& o) {
  renas::StrategyConfig c;
  const auto s = renas::ParseStrategy(o.strategy);
  if (!s) throw std::invalid_argument("unknown strategy '" + o.strategy + "'");
  c.strategy = *s;
  c.space.num_blocks = o.blocks;
  c.space.num_ops = o.ops;
  if (o.oracle == "tabular") {
    c.oracle.kind = renas::OracleKind::kTabular;
  } else if (o.oracle == "landscape") {
    c.oracle.kind = renas::OracleKind::kLandscape;
  } else {
    c.oracle.kind = renas::OracleKind::kTabular;
    c.oracle.path = fs::absolute(o.oracle).string();
  }
  c.oracle.seed = o.oracle_seed;
  c.oracle.landscape.scale = o.landscape_scale;
  c.evolution.population_size = o.pop;
  c.evolution.sample_size = o.sample;
  c.budget = o.budget;
  c.maturity.noise_sigma = o.noise;
  if (o.baseline == "ema") {
    c.reward.baseline = renas::BaselineKind::kEma;
  } else if (o.baseline == "none") {
    c.reward.baseline = renas::BaselineKind::kNone;
  } else {
    throw std::invalid_argument("baseline must be 'ema' or 'none'");
  }
  c.reward.entropy_weight = o.entropy_weight;
  c.target_fraction = o.target_fraction;
  c.controller.hidden_size = o.hidden;
  c.controller.embed_size = o.embed;
  c.Check();
  return c;
}

void WriteJson(const fs::path& path, const renas::Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int RunSearch(const Options& o) {
  const renas::StrategyConfig cfg = MakeConfig(o);
  const auto oracle = renas::MakeOracle(cfg.space, cfg.oracle);
  fs::create_directories(o.out);
  renas::JsonlWriter trace(fs::path(o.out) / "trace.jsonl");
  const renas::RunSummary run = renas::RunStrategy(cfg, o.seed, *oracle, &trace);
  {
    std::ofstream csv(fs::path(o.out) / "runs.csv");
    renas::WriteRunsCsv(csv, {run});
  }
  WriteJson(fs::path(o.out) / "summary.json", renas::SummaryJson(cfg, run));
  std::cout << o.strategy << " seed " << o.seed << ": best true fitness "
            << run.points.back().best_true << " (optimum " << *oracle->Optimum()
            << "), evaluations to target "
            << (run.reached ? std::to_string(run.evals_to_target) : "not reached")
            << "\n";
  return 0;
}

int RunCompare(const Options& o) {
  renas::CompareConfig cc;
  cc.base = MakeConfig(o);
  const std::vector<std::string> names =
      o.strategies.empty() ? std::vector<std::string>{"renas", "renas_nonbi", "ea_random",
                                                      "rl_construct", "random"}
                           : o.strategies;
  for (const std::string& n : names) {
    const auto s = renas::ParseStrategy(n);
    if (!s) throw std::invalid_argument("unknown strategy '" + n + "'");
    cc.strategies.push_back(*s);
  }
  cc.seeds = o.seeds;
  if (cc.seeds.empty()) {
    const int n = o.num_seeds > 0 ? o.num_seeds : 20;
    for (int k = 0; k < n; ++k) cc.seeds.push_back(o.seed + k);
  }
  cc.execution = o.serial ? renas::Execution::kSerial : renas::Execution::kParallel;
  cc.trace_dir = fs::path(o.out) / "traces";
  fs::create_directories(o.out);
  const auto oracle = renas::MakeOracle(cc.base.space, cc.base.oracle);
  const renas::CompareReport report = renas::Compare(cc, *oracle);
  {
    std::ofstream csv(fs::path(o.out) / "runs.csv");
    renas::WriteRunsCsv(csv, report.runs);
  }
  WriteJson(fs::path(o.out) / "summary.json", renas::SummaryJson(cc, report));

  std::cout << "optimum " << report.optimum << ", target " << report.target
            << ", " << cc.seeds.size() << " seeds, budget " << cc.base.budget << "\n";
  std::cout << std::left << std::setw(14) << "strategy" << std::setw(10) << "reached"
            << std::setw(12) << "median" << "ci\n";
  for (const auto& sr : report.strategies) {
    std::cout << std::left << std::setw(14) << renas::StrategyName(sr.strategy)
              << std::setw(10) << sr.reached << std::setw(12) << sr.median << "["
              << sr.median_ci.lo << ", " << sr.median_ci.hi << "]\n";
  }
  for (const auto& sp : report.speedups) {
    std::cout << "speedup vs " << renas::StrategyName(sp.other) << ": " << sp.ratio
              << " [" << sp.ci.lo << ", " << sp.ci.hi << "], rank-sum p "
              << sp.rank_sum.p_less << "\n";
  }
  return 0;
}

int RunOracleBuild(const Options& o) {
  renas::SpaceConfig space{o.blocks, o.ops};
  renas::LandscapeParams lp;
  lp.scale = o.landscape_scale;
  const renas::TabularOracle oracle = renas::TabularOracle::Build(
      space, o.oracle_seed,
      o.serial ? renas::Execution::kSerial : renas::Execution::kParallel, lp);
  oracle.Save(o.oracle_file);
  std::cout << oracle.Describe() << " -> " << o.oracle_file << "\n";
  return 0;
}

int RunOracleExport(const Options& o) {
  const renas::TabularOracle oracle = renas::TabularOracle::Load(o.oracle_file);
  oracle.ExportCsv(o.csv);
  std::cout << oracle.table().size() << " rows -> " << o.csv << "\n";
  return 0;
}

int RunReplay(const Options& o) {
  const renas::ReplayReport rep = renas::Replay(o.log);
  std::cout << (rep.match ? "MATCH: " : "MISMATCH: ") << rep.message << "\n";
  return rep.match ? 0 : 3;
}

void AddRunOptions(CLI::App& app, Options& o) {
  app.add_option("--blocks", o.blocks, "Blocks per cell (#B)");
  app.add_option("--ops", o.ops, "Number of candidate operations (2..6)");
  app.add_option("--pop", o.pop, "Population size (#P)");
  app.add_option("--sample", o.sample, "Tournament sample size (#S)");
  app.add_option("--budget", o.budget, "Total fitness evaluations");
  app.add_option("--seed", o.seed, "Run seed (first seed for compare)");
  app.add_option("--strategy", o.strategy,
                 "renas | renas_nonbi | ea_random | rl_construct | random");
  app.add_option("--oracle", o.oracle, "tabular | landscape | saved oracle file");
  app.add_option("--oracle-seed", o.oracle_seed, "Landscape seed");
  app.add_option("--landscape-scale", o.landscape_scale, "Landscape sharpness");
  app.add_option("--noise", o.noise, "Evaluation noise sigma");
  app.add_option("--baseline", o.baseline, "ema | none");
  app.add_option("--entropy-weight", o.entropy_weight, "Entropy bonus weight");
  app.add_option("--target-fraction", o.target_fraction,
                 "Target as a fraction of the oracle optimum");
  app.add_option("--hidden", o.hidden, "Controller LSTM width");
  app.add_option("--embed", o.embed, "Controller embedding width");
  app.add_option("--out", o.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforced evolutionary architecture search on synthetic oracles"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; CLI flags override it");
  Options o;
  app.add_option("--threads", o.threads, "OpenMP threads (0: runtime default)");

  // Run options live on the root so a flat config file reaches them;
  // subcommands fall through to accept them after the subcommand name.
  AddRunOptions(app, o);
  app.add_option("--seeds", o.seeds, "compare: explicit seed list")->delimiter(',');
  app.add_option("--num-seeds", o.num_seeds,
                 "compare: seeds --seed.. when --seeds is absent (default 20)");
  app.add_option("--strategies", o.strategies, "compare: subset of strategies")
      ->delimiter(',');

  CLI::App* search = app.add_subcommand("search", "Single run of one strategy");
  CLI::App* compare = app.add_subcommand("compare", "Strategies x seeds grid");
  compare->add_flag("--serial", o.serial, "Run the grid on one thread");

  CLI::App* oracle = app.add_subcommand("oracle", "Tabular oracle files");
  oracle->require_subcommand(1);
  CLI::App* build = oracle->add_subcommand("build", "Tabulate the reduced space");
  build->add_option("--blocks", o.blocks, "Blocks per cell");
  build->add_option("--ops", o.ops, "Number of operations");
  build->add_option("--oracle-seed", o.oracle_seed, "Landscape seed");
  build->add_option("--landscape-scale", o.landscape_scale, "Landscape sharpness");
  build->add_option("--out", o.oracle_file, "Output file")->required();
  build->add_flag("--serial", o.serial, "Single-threaded build");
  CLI::App* exp = oracle->add_subcommand("export", "Write a saved oracle as CSV");
  exp->add_option("file", o.oracle_file, "Saved oracle")->required()->check(CLI::ExistingFile);
  exp->add_option("--csv", o.csv, "CSV output")->required();

  CLI::App* replay = app.add_subcommand("replay", "Re-run a trace.jsonl and compare");
  replay->add_option("log", o.log, "trace.jsonl")->required()->check(CLI::ExistingFile);

  for (CLI::App* sub : {search, compare, oracle, build, exp, replay}) {
    sub->configurable()->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  if (o.threads > 0) omp_set_num_threads(o.threads);

  try {
    if (*search) return RunSearch(o);
    if (*compare) return RunCompare(o);
    if (*build) return RunOracleBuild(o);
    if (*exp) return RunOracleExport(o);
    if (*replay) return RunReplay(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
