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

#include "renas/harness.h"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <deque>
#include <exception>
#include <limits>
#include <set>
#include <stdexcept>

#include "renas/construct_policy.h"

namespace renas {

namespace {

constexpr std::string_view kStrategyNames[] = {"renas", "renas_nonbi",
                                               "ea_random", "rl_construct",
                                               "random"};

// Streams 1..4 belong to the evolution loop; policy initialization uses 5.
constexpr std::uint64_t kSampleStream = 3;
constexpr std::uint64_t kNoiseStream = 4;
constexpr std::uint64_t kPolicyInitStream = 5;

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
};

template <class Range>
MeanVar TrueFitnessStats(const Range& individuals) {
  std::vector<double> f;
  for (const Individual& ind : individuals) f.push_back(ind.true_fitness);
  return {stats::Mean(f), stats::Variance(f)};
}

std::unique_ptr<Mutator> MakeMutator(const StrategyConfig& cfg,
                                     std::uint64_t seed) {
  switch (cfg.strategy) {
    case Strategy::kRenas:
    case Strategy::kRenasNonBi: {
      ControllerConfig cc = cfg.controller;
      cc.bidirectional = cfg.strategy == Strategy::kRenas;
      Rng rng = MakeStream(seed, kPolicyInitStream);
      return std::make_unique<ControllerMutator>(ControllerTrainer(
          ControllerParams::Init(cfg.space, cc, rng), cfg.reward, cfg.adam));
    }
    case Strategy::kEaRandom:
      return std::make_unique<RandomMutator>();
    default:
      throw std::logic_error("strategy has no mutator");
  }
}

class PointRecorder {
 public:
  explicit PointRecorder(RunSummary& run) : run_(run) {}

  void Add(const Individual& ind, MeanVar pop) {
    best_ = std::max(best_, ind.true_fitness);
    EvalPoint p;
    p.index = static_cast<std::int64_t>(run_.points.size()) + 1;
    p.cell = ToText(ind.cell);
    p.observed = ind.fitness;
    p.true_fitness = ind.true_fitness;
    p.maturity = ind.maturity;
    p.best_true = best_;
    p.pop_mean = pop.mean;
    p.pop_var = pop.var;
    if (!run_.reached && ind.true_fitness >= run_.target) {
      run_.reached = true;
      run_.evals_to_target = p.index;
    }
    run_.points.push_back(std::move(p));
  }

 private:
  RunSummary& run_;
  double best_ = -std::numeric_limits<double>::infinity();
};

Json FinalRecord(const std::vector<Individual>& members,
                 const std::vector<double>& retrained) {
  Json pop = Json::array();
  for (const Individual& m : members) pop.push_back(ToJson(m));
  return {{"type", "final"}, {"population", pop}, {"retrained", retrained}};
}

void RunEvolutionStrategy(const StrategyConfig& cfg, std::uint64_t seed,
                          const FitnessOracle& oracle, RunSummary& run,
                          JsonlWriter* trace) {
  PointRecorder rec(run);
  std::unique_ptr<Mutator> mutator = MakeMutator(cfg, seed);
  EvolutionStreams streams = EvolutionStreams::FromSeed(seed);
  const RunResult res = RunEvolution(
      oracle, cfg.maturity, cfg.evolution,
      cfg.budget - cfg.evolution.population_size, *mutator, streams,
      [&](const Population& pop, const Individual& ind) {
        rec.Add(ind, TrueFitnessStats(pop.members));
      });
  for (const Individual& m : res.population.members) {
    run.final_fitness.push_back(m.fitness);
  }
  if (trace == nullptr) return;
  for (int k = 0; k < cfg.evolution.population_size; ++k) {
    trace->Write({{"type", "init"}, {"individual", ToJson(res.population.history[k])}});
  }
  for (const StepRecord& s : res.steps) {
    Json j = ToJson(s);
    j["type"] = "step";
    trace->Write(j);
  }
  trace->Write(FinalRecord(res.population.members, res.retrained_fitness));
}

void RunSamplingStrategy(const StrategyConfig& cfg, std::uint64_t seed,
                         const FitnessOracle& oracle, RunSummary& run,
                         JsonlWriter* trace) {
  PointRecorder rec(run);
  Rng sample = MakeStream(seed, kSampleStream);
  Rng noise = MakeStream(seed, kNoiseStream);
  std::optional<ConstructionTrainer> trainer;
  if (cfg.strategy == Strategy::kRlConstruct) {
    ControllerConfig cc = cfg.controller;
    cc.bidirectional = false;
    Rng init = MakeStream(seed, kPolicyInitStream);
    trainer.emplace(ConstructorParams::Init(cfg.space, cc, init), cfg.reward,
                    cfg.adam);
  }
  std::deque<Individual> window;
  for (std::int64_t i = 0; i < cfg.budget; ++i) {
    Individual ind;
    ind.id = i;
    ind.cell = trainer ? SampleConstruction(trainer->params(), sample).cell
                       : RandomCell(cfg.space, sample);
    ind.maturity = 1.0;
    ind.fitness = Evaluate(oracle, cfg.maturity, ind.cell, ind.maturity, noise);
    ind.true_fitness = oracle.TrueFitness(ind.cell);
    std::optional<UpdateDiagnostics> diag;
    if (trainer) diag = trainer->Update(ind.cell, ind.fitness);
    window.push_back(ind);
    if (static_cast<int>(window.size()) > cfg.evolution.population_size) {
      window.pop_front();
    }
    rec.Add(ind, TrueFitnessStats(window));
    if (trace != nullptr) {
      trace->Write({{"type", "eval"},
                    {"individual", ToJson(ind)},
                    {"controller", diag ? ToJson(*diag) : Json()}});
    }
  }
  for (const Individual& m : window) run.final_fitness.push_back(m.fitness);
  if (trace != nullptr) {
    trace->Write(FinalRecord({window.begin(), window.end()}, {}));
  }
}

Json IntervalJson(const stats::Interval& ci) { return Json::array({ci.lo, ci.hi}); }

}  // namespace

std::string_view StrategyName(Strategy s) {
  return kStrategyNames[static_cast<int>(s)];
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  for (int k = 0; k < 5; ++k) {
    if (kStrategyNames[k] == name) return static_cast<Strategy>(k);
  }
  return std::nullopt;
}

std::vector<Strategy> AllStrategies() {
  return {Strategy::kRenas, Strategy::kRenasNonBi, Strategy::kEaRandom,
          Strategy::kRlConstruct, Strategy::kRandom};
}

void StrategyConfig::Check() const {
  space.Check();
  evolution.Check();
  maturity.Check();
  reward.Check();
  if (budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (IsEvolutionary(strategy) && budget < evolution.population_size) {
    throw std::invalid_argument(
        "budget must cover the initial population (" +
        std::to_string(evolution.population_size) + " evaluations)");
  }
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw std::invalid_argument("target fraction must be in (0, 1]");
  }
  if (controller.embed_size < 1 || controller.hidden_size < 1) {
    throw std::invalid_argument("controller sizes must be >= 1");
  }
  if (!(adam.learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
}

Json ToJson(const StrategyConfig& c) {
  const LandscapeParams& l = c.oracle.landscape;
  return {
      {"strategy", std::string(StrategyName(c.strategy))},
      {"blocks", c.space.num_blocks},
      {"ops", c.space.num_ops},
      {"oracle",
       {{"kind", c.oracle.kind == OracleKind::kTabular ? "tabular" : "landscape"},
        {"seed", c.oracle.seed},
        {"path", c.oracle.path},
        {"op_quality_std", l.op_quality_std},
        {"op_pair_std", l.op_pair_std},
        {"input_std", l.input_std},
        {"chain_std", l.chain_std},
        {"scale", l.scale}}},
      {"pop", c.evolution.population_size},
      {"sample", c.evolution.sample_size},
      {"budget", c.budget},
      {"maturity",
       {{"tau", c.maturity.tau},
        {"full_epochs", c.maturity.full_epochs},
        {"finetune_epochs", c.maturity.finetune_epochs},
        {"noise", c.maturity.noise_sigma},
        {"initial", c.maturity.initial_maturity}}},
      {"reward",
       {{"entropy_weight", c.reward.entropy_weight},
        {"fitness_clip", c.reward.fitness_clip},
        {"baseline", c.reward.baseline == BaselineKind::kEma ? "ema" : "none"},
        {"baseline_decay", c.reward.baseline_decay}}},
      {"controller",
       {{"embed", c.controller.embed_size},
        {"hidden", c.controller.hidden_size},
        {"init_stddev", c.controller.init_stddev},
        {"tanh_constant", c.controller.shaping.tanh_constant},
        {"temperature", c.controller.shaping.temperature}}},
      {"adam",
       {{"lr", c.adam.learning_rate},
        {"beta1", c.adam.beta1},
        {"beta2", c.adam.beta2},
        {"epsilon", c.adam.epsilon}}},
      {"target_fraction", c.target_fraction}};
}

StrategyConfig ConfigFromJson(const Json& j) {
  try {
    StrategyConfig c;
    const auto s = ParseStrategy(j.at("strategy").get<std::string>());
    if (!s) throw std::runtime_error("unknown strategy");
    c.strategy = *s;
    c.space.num_blocks = j.at("blocks").get<int>();
    c.space.num_ops = j.at("ops").get<int>();
    const Json& o = j.at("oracle");
    const std::string kind = o.at("kind").get<std::string>();
    if (kind != "tabular" && kind != "landscape") {
      throw std::runtime_error("unknown oracle kind " + kind);
    }
    c.oracle.kind = kind == "tabular" ? OracleKind::kTabular : OracleKind::kLandscape;
    c.oracle.seed = o.at("seed").get<std::uint64_t>();
    c.oracle.path = o.at("path").get<std::string>();
    c.oracle.landscape.op_quality_std = o.at("op_quality_std").get<double>();
    c.oracle.landscape.op_pair_std = o.at("op_pair_std").get<double>();
    c.oracle.landscape.input_std = o.at("input_std").get<double>();
    c.oracle.landscape.chain_std = o.at("chain_std").get<double>();
    c.oracle.landscape.scale = o.at("scale").get<double>();
    c.evolution.population_size = j.at("pop").get<int>();
    c.evolution.sample_size = j.at("sample").get<int>();
    c.budget = j.at("budget").get<std::int64_t>();
    const Json& m = j.at("maturity");
    c.maturity.tau = m.at("tau").get<double>();
    c.maturity.full_epochs = m.at("full_epochs").get<double>();
    c.maturity.finetune_epochs = m.at("finetune_epochs").get<double>();
    c.maturity.noise_sigma = m.at("noise").get<double>();
    c.maturity.initial_maturity = m.at("initial").get<double>();
    const Json& r = j.at("reward");
    c.reward.entropy_weight = r.at("entropy_weight").get<double>();
    c.reward.fitness_clip = r.at("fitness_clip").get<double>();
    c.reward.baseline =
        r.at("baseline").get<std::string>() == "ema" ? BaselineKind::kEma : BaselineKind::kNone;
    c.reward.baseline_decay = r.at("baseline_decay").get<double>();
    const Json& k = j.at("controller");
    c.controller.embed_size = k.at("embed").get<int>();
    c.controller.hidden_size = k.at("hidden").get<int>();
    c.controller.init_stddev = k.at("init_stddev").get<double>();
    c.controller.shaping.tanh_constant = k.at("tanh_constant").get<double>();
    c.controller.shaping.temperature = k.at("temperature").get<double>();
    const Json& a = j.at("adam");
    c.adam.learning_rate = a.at("lr").get<double>();
    c.adam.beta1 = a.at("beta1").get<double>();
    c.adam.beta2 = a.at("beta2").get<double>();
    c.adam.epsilon = a.at("epsilon").get<double>();
    c.target_fraction = j.at("target_fraction").get<double>();
    return c;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("bad run config: ") + e.what());
  }
}

std::unique_ptr<FitnessOracle> MakeOracle(const SpaceConfig& space,
                                          const OracleSpec& spec,
                                          Execution exec) {
  if (spec.kind == OracleKind::kLandscape) {
    return std::make_unique<LandscapeOracle>(
        Landscape(space, spec.seed, spec.landscape));
  }
  if (!spec.path.empty()) {
    auto oracle = std::make_unique<TabularOracle>(TabularOracle::Load(spec.path));
    if (!(oracle->space() == space)) {
      throw std::invalid_argument("oracle file " + spec.path +
                                  " covers a different search space");
    }
    return oracle;
  }
  return std::make_unique<TabularOracle>(
      TabularOracle::Build(space, spec.seed, exec, spec.landscape));
}

RunSummary RunStrategy(const StrategyConfig& cfg, std::uint64_t seed,
                       const FitnessOracle& oracle, JsonlWriter* trace) {
  cfg.Check();
  if (!(oracle.space() == cfg.space)) {
    throw std::invalid_argument("oracle space differs from the run's space");
  }
  const std::optional<double> optimum = oracle.Optimum();
  if (!optimum) throw std::invalid_argument("oracle has no known optimum");
  const auto start = std::chrono::steady_clock::now();

  RunSummary run;
  run.strategy = cfg.strategy;
  run.seed = seed;
  run.target = cfg.target_fraction * *optimum;
  run.evals_to_target = cfg.budget + 1;
  run.points.reserve(cfg.budget);
  if (trace != nullptr) {
    trace->Write({{"type", "header"},
                  {"seed", seed},
                  {"config", ToJson(cfg)},
                  {"oracle", oracle.Describe()}});
  }
  if (IsEvolutionary(cfg.strategy)) {
    RunEvolutionStrategy(cfg, seed, oracle, run, trace);
  } else {
    RunSamplingStrategy(cfg, seed, oracle, run, trace);
  }
  run.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start).count();
  return run;
}

CompareReport Compare(const CompareConfig& cfg, const FitnessOracle& oracle) {
  if (cfg.strategies.empty() || cfg.seeds.empty()) {
    throw std::invalid_argument("compare needs at least one strategy and seed");
  }
  if (std::set(cfg.strategies.begin(), cfg.strategies.end()).size() !=
      cfg.strategies.size()) {
    throw std::invalid_argument("duplicate strategy in compare");
  }
  for (Strategy s : cfg.strategies) {
    StrategyConfig c = cfg.base;
    c.strategy = s;
    c.Check();
  }
  if (!(oracle.space() == cfg.base.space)) {
    throw std::invalid_argument("oracle space differs from the comparison's space");
  }
  if (cfg.trace_dir) std::filesystem::create_directories(*cfg.trace_dir);

  const std::size_t ns = cfg.seeds.size();
  const std::size_t jobs = cfg.strategies.size() * ns;
  CompareReport report;
  report.runs.resize(jobs);
  const auto run_job = [&](std::size_t i) {
    StrategyConfig c = cfg.base;
    c.strategy = cfg.strategies[i / ns];
    const std::uint64_t seed = cfg.seeds[i % ns];
    std::optional<JsonlWriter> writer;
    if (cfg.trace_dir) {
      writer.emplace(*cfg.trace_dir / (std::string(StrategyName(c.strategy)) +
                                       "-seed" + std::to_string(seed) + ".jsonl"));
    }
    report.runs[i] = RunStrategy(c, seed, oracle, writer ? &*writer : nullptr);
  };

  if (cfg.execution == Execution::kParallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(jobs); ++i) {
      try {
        run_job(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(renas_compare_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::size_t i = 0; i < jobs; ++i) run_job(i);
  }

  report.optimum = *oracle.Optimum();
  report.target = cfg.base.target_fraction * report.optimum;
  for (std::size_t k = 0; k < cfg.strategies.size(); ++k) {
    StrategyReport sr;
    sr.strategy = cfg.strategies[k];
    for (std::size_t s = 0; s < ns; ++s) {
      const RunSummary& run = report.runs[k * ns + s];
      sr.evals_to_target.push_back(static_cast<double>(run.evals_to_target));
      sr.reached += run.reached ? 1 : 0;
    }
    sr.median = stats::Median(sr.evals_to_target);
    Rng rng = MakeStream(cfg.bootstrap_seed, 100 + k);
    sr.median_ci = stats::BootstrapMedianCi(sr.evals_to_target,
                                            cfg.bootstrap_resamples,
                                            cfg.ci_level, rng);
    report.strategies.push_back(std::move(sr));
  }

  const auto renas = std::find(cfg.strategies.begin(), cfg.strategies.end(),
                               Strategy::kRenas);
  if (renas != cfg.strategies.end()) {
    const StrategyReport& base = report.strategies[renas - cfg.strategies.begin()];
    for (std::size_t k = 0; k < report.strategies.size(); ++k) {
      const StrategyReport& other = report.strategies[k];
      if (other.strategy == Strategy::kRenas) continue;
      SpeedupReport sp;
      sp.other = other.strategy;
      sp.ratio = other.median / base.median;
      Rng rng = MakeStream(cfg.bootstrap_seed, 200 + k);
      sp.ci = stats::BootstrapMedianRatioCi(other.evals_to_target,
                                            base.evals_to_target,
                                            cfg.bootstrap_resamples,
                                            cfg.ci_level, rng);
      sp.rank_sum = stats::MannWhitney(base.evals_to_target, other.evals_to_target);
      report.speedups.push_back(sp);
    }
  }
  return report;
}

void WriteRunsCsv(std::ostream& out, const std::vector<RunSummary>& runs) {
  out << "strategy,seed,eval,cell,observed_fitness,true_fitness,maturity,"
         "best_true_fitness,pop_mean,pop_var\n";
  for (const RunSummary& run : runs) {
    const std::string_view name = StrategyName(run.strategy);
    for (const EvalPoint& p : run.points) {
      out << name << ',' << run.seed << ',' << p.index << ",\"" << p.cell
          << "\"," << FormatDouble(p.observed) << ','
          << FormatDouble(p.true_fitness) << ',' << FormatDouble(p.maturity)
          << ',' << FormatDouble(p.best_true) << ',' << FormatDouble(p.pop_mean)
          << ',' << FormatDouble(p.pop_var) << '\n';
    }
  }
}

Json SummaryJson(const CompareConfig& cfg, const CompareReport& report) {
  Json seeds = cfg.seeds;
  Json strategies = Json::array();
  const std::size_t ns = cfg.seeds.size();
  for (std::size_t k = 0; k < report.strategies.size(); ++k) {
    const StrategyReport& sr = report.strategies[k];
    const std::size_t len = report.runs[k * ns].points.size();
    std::vector<double> best(len), mean(len), var(len), wall;
    for (std::size_t t = 0; t < len; ++t) {
      std::vector<double> b;
      for (std::size_t s = 0; s < ns; ++s) {
        const EvalPoint& p = report.runs[k * ns + s].points[t];
        b.push_back(p.best_true);
        mean[t] += p.pop_mean / static_cast<double>(ns);
        var[t] += p.pop_var / static_cast<double>(ns);
      }
      best[t] = stats::Median(b);
    }
    for (std::size_t s = 0; s < ns; ++s) wall.push_back(report.runs[k * ns + s].wall_seconds);
    strategies.push_back({{"strategy", std::string(StrategyName(sr.strategy))},
                          {"evals_to_target", sr.evals_to_target},
                          {"reached", sr.reached},
                          {"median_evals_to_target", sr.median},
                          {"median_ci", IntervalJson(sr.median_ci)},
                          {"wall_seconds", wall},
                          {"curves",
                           {{"median_best_true_fitness", best},
                            {"mean_population_fitness", mean},
                            {"mean_population_variance", var}}}});
  }
  Json speedups = Json::array();
  for (const SpeedupReport& sp : report.speedups) {
    speedups.push_back({{"baseline", std::string(StrategyName(sp.other))},
                        {"median_ratio", sp.ratio},
                        {"ci", IntervalJson(sp.ci)},
                        {"rank_sum_u", sp.rank_sum.u},
                        {"rank_sum_z", sp.rank_sum.z},
                        {"p_renas_fewer_evals", sp.rank_sum.p_less}});
  }
  return {{"config", ToJson(cfg.base)},
          {"seeds", seeds},
          {"optimum", report.optimum},
          {"target", report.target},
          {"censored_value", "budget + 1 when the target is never reached"},
          {"ci_level", cfg.ci_level},
          {"bootstrap_resamples", cfg.bootstrap_resamples},
          {"strategies", strategies},
          {"speedup_vs_renas", speedups},
          {"reference_speedup_range", {1.5, 2.0}}};
}

Json SummaryJson(const StrategyConfig& cfg, const RunSummary& run) {
  const EvalPoint& last = run.points.back();
  return {{"config", ToJson(cfg)},
          {"seed", run.seed},
          {"evaluations", run.points.size()},
          {"target", run.target},
          {"reached", run.reached},
          {"evals_to_target", run.evals_to_target},
          {"best_true_fitness", last.best_true},
          {"final_population_fitness", run.final_fitness},
          {"final_population_mean", last.pop_mean},
          {"final_population_variance", last.pop_var},
          {"wall_seconds", run.wall_seconds}};
}

ReplayReport Replay(const std::filesystem::path& trace_path) {
  const std::vector<Json> records = ReadJsonl(trace_path);
  if (records.empty() || records.front().value("type", "") != "header") {
    throw std::runtime_error(trace_path.string() + ": missing header record");
  }
  const StrategyConfig cfg = ConfigFromJson(records.front().at("config"));
  const auto seed = records.front().at("seed").get<std::uint64_t>();
  cfg.Check();
  const std::unique_ptr<FitnessOracle> oracle = MakeOracle(cfg.space, cfg.oracle);

  std::vector<double> logged;       // observed fitness per evaluation
  std::vector<std::string> cells;   // sampling strategies only
  std::vector<MutationTrace> traces;
  std::vector<double> logged_final, logged_retrained;
  try {
    for (std::size_t i = 1; i < records.size(); ++i) {
      const Json& r = records[i];
      const std::string type = r.at("type").get<std::string>();
      if (type == "init" || type == "eval") {
        logged.push_back(r.at("individual").at("fitness").get<double>());
        cells.push_back(r.at("individual").at("cell").get<std::string>());
      } else if (type == "step") {
        logged.push_back(r.at("child").at("fitness").get<double>());
        traces.push_back(TraceFromJson(r.at("trace")));
      } else if (type == "final") {
        for (const Json& m : r.at("population")) {
          logged_final.push_back(m.at("fitness").get<double>());
        }
        logged_retrained = r.at("retrained").get<std::vector<double>>();
      }
    }
  } catch (const Json::exception& e) {
    throw std::runtime_error(trace_path.string() + ": " + e.what());
  }

  std::vector<double> replayed, replayed_final, replayed_retrained;
  if (IsEvolutionary(cfg.strategy)) {
    ReplayMutator mutator(traces);
    EvolutionStreams streams = EvolutionStreams::FromSeed(seed);
    const RunResult res = RunEvolution(
        *oracle, cfg.maturity, cfg.evolution,
        static_cast<std::int64_t>(traces.size()), mutator, streams,
        [&](const Population&, const Individual& ind) {
          replayed.push_back(ind.fitness);
        });
    for (const Individual& m : res.population.members) {
      replayed_final.push_back(m.fitness);
    }
    replayed_retrained = res.retrained_fitness;
  } else {
    Rng noise = MakeStream(seed, kNoiseStream);
    std::deque<double> window;
    for (const std::string& text : cells) {
      const CellSpec cell = ParseCell(text, cfg.space.num_ops);
      replayed.push_back(Evaluate(*oracle, cfg.maturity, cell, 1.0, noise));
      window.push_back(replayed.back());
      if (static_cast<int>(window.size()) > cfg.evolution.population_size) {
        window.pop_front();
      }
    }
    replayed_final.assign(window.begin(), window.end());
  }

  ReplayReport rep;
  rep.evaluations = static_cast<std::int64_t>(replayed.size());
  const std::size_t n = std::max(logged.size(), replayed.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= logged.size() || i >= replayed.size() || logged[i] != replayed[i]) {
      if (rep.mismatches == 0) {
        rep.message = "first divergence at evaluation " + std::to_string(i + 1);
      }
      ++rep.mismatches;
    }
  }
  if (rep.mismatches == 0 && replayed_final != logged_final) {
    rep.mismatches = 1;
    rep.message = "final population fitness differs";
  }
  if (rep.mismatches == 0 && replayed_retrained != logged_retrained) {
    rep.mismatches = 1;
    rep.message = "retrained fitness differs";
  }
  rep.match = rep.mismatches == 0;
  if (rep.match) {
    rep.message = "replayed " + std::to_string(rep.evaluations) +
                  " evaluations; final population identical";
  }
  return rep;
}

}  // namespace renas
