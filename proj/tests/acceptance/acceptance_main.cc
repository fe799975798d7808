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

// Acceptance checks AC1-AC8. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Usage: renas_acceptance [--out DIR] [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "renas/arch_space.h"
#include "renas/construct_policy.h"
#include "renas/controller.h"
#include "renas/evolution.h"
#include "renas/gradcheck.h"
#include "renas/harness.h"
#include "renas/reinforce.h"
#include "toys.h"

namespace renas {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

ControllerConfig Tiny(int size, double stddev = 0.5) {
  ControllerConfig c;
  c.embed_size = c.hidden_size = size;
  c.init_stddev = stddev;
  return c;
}

Outcome Ac1() {
  const BigInt full = SpaceSize(SpaceConfig{5, 6});
  const SpaceConfig small{2, 3};
  std::set<std::uint64_t> seen;
  std::int64_t invalid = 0;
  CellEnumerator e(small);
  while (auto c = e.Next()) {
    invalid += Validate(*c, small).has_value();
    seen.insert(CellIndex(*c));
  }
  const BigInt expect("31345665638400");
  std::ostringstream d;
  d << "size{5,6}=" << full << ", enumerated{2,3}=" << seen.size()
    << " of " << SpaceSize(small) << ", invalid=" << invalid;
  return {full == expect && BigInt(seen.size()) == SpaceSize(small) && invalid == 0, d.str()};
}

Outcome Ac2() {
  const bool spots = ShapedReward(0.0) == 0.0 && ShapedReward(0.5) == 1.0;
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 0.999);
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    violations += !(ShapedReward(a) < ShapedReward(b));
  }
  std::ostringstream d;
  d << "r(0)=" << ShapedReward(0.0) << ", r(0.5)=" << ShapedReward(0.5)
    << ", monotonicity violations=" << violations << "/10000";
  return {spots && violations == 0, d.str()};
}

// Central differences with h = 1e-4; smaller steps lose small recurrent
// gradients to roundoff.
Outcome Ac3() {
  const SpaceConfig space{2, 6};
  const double h = 1e-4;
  Rng rng(3);
  double worst_mutation = 0.0, worst_construct = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    ControllerParams p = ControllerParams::Init(space, Tiny(4), rng);
    const CellSpec cell = RandomCell(space, rng);
    const MutationTrace tr = SampleMutation(p, cell, rng);
    ControllerParams g = p.ZerosLike();
    TraceLogProb(p, cell, tr, &g);
    const auto r1 = nn::Gradcheck([&] { return TraceLogProb(p, cell, tr).logprob; }, p.Tensors(),
                                  std::as_const(g).Tensors(), h);
    worst_mutation = std::max(worst_mutation, r1.max_rel_error);

    ConstructorParams q = ConstructorParams::Init(space, Tiny(4), rng);
    const CellSpec built = SampleConstruction(q, rng).cell;
    ConstructorParams gq = q.ZerosLike();
    BackwardConstruction(q, ForwardConstruction(q, built), 1.0, 0.0, gq);
    const auto r2 = nn::Gradcheck([&] { return ForwardConstruction(q, built).score.logprob; },
                                  q.Tensors(), std::as_const(gq).Tensors(), h);
    worst_construct = std::max(worst_construct, r2.max_rel_error);
  }
  std::ostringstream d;
  d << "max rel err: trace_logprob " << worst_mutation << ", rl_construct " << worst_construct
    << " (20 draws)";
  return {worst_mutation < 1e-4 && worst_construct < 1e-4, d.str()};
}

Outcome Ac4() {
  Rng rng(4);
  std::int64_t failures = 0, samples = 0;
  for (int group = 0; group < 100; ++group) {
    const SpaceConfig space{1 + group % 5, 2 + group % 5};
    const ControllerParams p =
        ControllerParams::Init(space, Tiny(8, 0.1 + 0.05 * (group % 10)), rng);
    for (int t = 0; t < 1000; ++t, ++samples) {
      const CellSpec parent = RandomCell(space, rng);
      const MutationTrace tr = SampleMutation(p, parent, rng);
      const bool shape = static_cast<int>(tr.actions.size()) == space.num_blocks &&
                         tr.num_decisions() == 2 * space.num_blocks;
      if (!shape || CheckTrace(parent, tr).has_value() ||
          Validate(ApplyMutation(parent, tr), space).has_value()) {
        ++failures;
      }
    }
  }
  std::ostringstream d;
  d << samples << " mutations, " << failures << " failures";
  return {samples == 100000 && failures == 0, d.str()};
}

Outcome Ac5() {
  const SpaceConfig space{3, 4};
  const auto oracle = TabularOracle::Build(space, 0);
  MaturityModel model;
  model.noise_sigma = 0.0;
  const EvolutionConfig config;
  Rng init = MakeStream(5, 5);
  ControllerMutator mutator(
      ControllerTrainer(ControllerParams::Init(space, Tiny(8, 0.01), init), RewardConfig{}));
  auto streams = EvolutionStreams::FromSeed(5);
  Population pop =
      Initialize(oracle, model, config.population_size, streams.init, streams.noise);
  std::int64_t violations = 0;
  double best = 0.0;
  for (const auto& m : pop.members) best = std::max(best, m.fitness);
  const auto find = [](const std::vector<Individual>& v, std::int64_t id) {
    return std::find_if(v.begin(), v.end(), [id](const Individual& m) { return m.id == id; });
  };
  for (int s = 1; s <= 10000; ++s) {
    const std::vector<Individual> before = pop.members;
    const StepRecord r = EvolutionStep(pop, mutator, oracle, model, config.sample_size, s,
                                       streams.select, streams.mutate, streams.noise);
    bool ok = pop.members.size() == before.size() &&
              static_cast<int>(r.sampled_ids.size()) == config.sample_size;
    const Individual* top = nullptr;
    const Individual* bottom = nullptr;
    for (std::int64_t id : r.sampled_ids) {
      const auto it = find(before, id);
      if (it == before.end()) {
        ok = false;
        continue;
      }
      if (!top || it->fitness > top->fitness || (it->fitness == top->fitness && it->id < top->id)) {
        top = &*it;
      }
      if (!bottom || it->fitness < bottom->fitness ||
          (it->fitness == bottom->fitness && it->id > bottom->id)) {
        bottom = &*it;
      }
    }
    ok = ok && top && bottom && r.parent_id == top->id && r.child.parent_id == top->id &&
         r.removed_id == bottom->id;
    // Push-pop: removed member gone, child present, the rest untouched.
    ok = ok && find(pop.members, r.removed_id) == pop.members.end() &&
         find(pop.members, r.child.id) != pop.members.end();
    for (const Individual& m : before) {
      if (bottom && m.id != bottom->id) ok = ok && find(pop.members, m.id) != pop.members.end();
    }
    double now = 0.0;
    for (const auto& m : pop.members) now = std::max(now, m.fitness);
    ok = ok && now >= best;
    best = now;
    violations += !ok;
  }
  std::ostringstream d;
  d << "10000 steps, " << violations << " contract violations";
  return {violations == 0, d.str()};
}

Outcome Ac6() {
  const toys::MutationBandit bandit;
  int above = 0;
  std::ostringstream d;
  d << "p(rewarded) after 2000 updates:";
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double p = bandit.Train(seed, 2000);
    above += p > 0.6;
    d << " " << std::round(p * 1000) / 1000;
  }
  d << "; " << above << "/10 seeds > 0.6";
  return {above >= 9, d.str()};
}

const StrategyReport& ReportFor(const CompareReport& r, Strategy s) {
  return *std::find_if(r.strategies.begin(), r.strategies.end(),
                       [s](const StrategyReport& x) { return x.strategy == s; });
}

const SpeedupReport& SpeedupFor(const CompareReport& r, Strategy s) {
  return *std::find_if(r.speedups.begin(), r.speedups.end(),
                       [s](const SpeedupReport& x) { return x.other == s; });
}

Outcome Ac7(const fs::path& out) {
  CompareConfig cc;
  cc.strategies = AllStrategies();
  for (std::uint64_t s = 0; s < 20; ++s) cc.seeds.push_back(s);
  const auto oracle = MakeOracle(cc.base.space, cc.base.oracle);
  const CompareReport rep = Compare(cc, *oracle);
  fs::create_directories(out);
  {
    std::ofstream csv(out / "runs.csv");
    WriteRunsCsv(csv, rep.runs);
    std::ofstream(out / "summary.json") << SummaryJson(cc, rep).dump(2) << "\n";
  }
  const StrategyReport& renas = ReportFor(rep, Strategy::kRenas);
  std::ostringstream d;
  d << "median evals to target:";
  for (const StrategyReport& s : rep.strategies) {
    d << " " << StrategyName(s.strategy) << " " << s.median << " [" << s.median_ci.lo << ", "
      << s.median_ci.hi << "]";
  }
  bool pass = true;
  for (Strategy other : {Strategy::kEaRandom, Strategy::kRandom}) {
    const SpeedupReport& sp = SpeedupFor(rep, other);
    pass = pass && renas.median < ReportFor(rep, other).median && sp.rank_sum.p_less < 0.05;
    d << "; vs " << StrategyName(other) << ": speedup " << sp.ratio << " [" << sp.ci.lo << ", "
      << sp.ci.hi << "], p=" << sp.rank_sum.p_less;
  }
  d << " (reference speedup around 1.5-2.0)";
  const double nonbi = ReportFor(rep, Strategy::kRenasNonBi).median;
  pass = pass && nonbi >= renas.median;
  d << "; non-bi median " << nonbi << " >= renas " << renas.median;
  return {pass, d.str()};
}

Outcome Ac8(const fs::path& out) {
  fs::create_directories(out);
  StrategyConfig base;
  base.budget = 400;
  const auto oracle = MakeOracle(base.space, base.oracle);
  std::ostringstream d;
  bool pass = true;
  for (Strategy s : AllStrategies()) {
    StrategyConfig c = base;
    c.strategy = s;
    const fs::path path = out / (std::string(StrategyName(s)) + ".jsonl");
    {
      JsonlWriter w(path);
      RunStrategy(c, 7, *oracle, &w);
    }
    const ReplayReport r = Replay(path);
    pass = pass && r.match && r.evaluations == c.budget;
    d << StrategyName(s) << (r.match ? " match" : " MISMATCH (" + r.message + ")") << "; ";
  }
  d << "budget " << base.budget << " each";
  return {pass, d.str()};
}

struct Criterion {
  int id;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace renas

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "renas_acceptance";
  int only = 0;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--out") {
      out = argv[i + 1];
    } else if (flag == "--only") {
      only = std::stoi(argv[i + 1]);
    } else {
      std::cerr << "usage: " << argv[0] << " [--out DIR] [--only N]\n";
      return 2;
    }
  }
  using renas::Criterion;
  const std::vector<Criterion> criteria = {
      {1, 10, renas::Ac1},
      {2, 1, renas::Ac2},
      {3, 60, renas::Ac3},
      {4, 60, renas::Ac4},
      {5, 60, renas::Ac5},
      {6, 120, renas::Ac6},
      {7, 900, [&] { return renas::Ac7(out / "ac7"); }},
      {8, 60, [&] { return renas::Ac8(out / "ac8"); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    renas::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("AC%d %s (%.2fs, limit %.0fs%s): %s\n", c.id, pass ? "PASS" : "FAIL", secs,
                c.limit_seconds, in_time ? "" : ", over time", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
