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

#include "renas/evaluators.h"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace renas {

namespace {

std::string FormatDouble(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double ParseDouble(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number '" + std::string(s) + "'");
  }
  return v;
}

// Per-block digits in token order: (i1, i2, o1, o2) with input digits as in
// the token map (prev2 -> 0, prev1 -> 1, block k -> 1 + k).
std::vector<int> Digits(const CellSpec& cell) {
  std::vector<int> d;
  d.reserve(4 * cell.blocks.size());
  for (const BlockSpec& blk : cell.blocks) {
    d.push_back(InputToken(blk.i1));
    d.push_back(InputToken(blk.i2));
    d.push_back(static_cast<int>(blk.o1));
    d.push_back(static_cast<int>(blk.o2));
  }
  return d;
}

double Rescale(double v, double lo, double hi) {
  if (!(hi > lo)) return 0.5 * (kLandscapeLow + kLandscapeHigh);
  const double u = (v - lo) / (hi - lo);
  return std::clamp(kLandscapeLow + (kLandscapeHigh - kLandscapeLow) * u,
                    kLandscapeLow, kLandscapeHigh);
}

}  // namespace

// --- MaturityModel --------------------------------------------------------

void MaturityModel::Check() const {
  if (!(tau > 0.0) || !(full_epochs > 0.0) || !(finetune_epochs >= 0.0) ||
      !(noise_sigma >= 0.0) || !(initial_maturity >= 0.0 && initial_maturity <= 1.0)) {
    throw std::invalid_argument(
        "maturity model needs tau > 0, full_epochs > 0, finetune_epochs >= 0, "
        "noise_sigma >= 0 and initial_maturity in [0, 1]");
  }
}

double MaturityModel::Factor(double maturity) const {
  return 1.0 - std::exp(-std::clamp(maturity, 0.0, 1.0) * full_epochs / tau);
}

double SharedTokenFraction(const CellSpec& a, const CellSpec& b) {
  if (a.num_blocks() != b.num_blocks() || a.num_ops != b.num_ops) {
    throw std::invalid_argument("cells come from different search spaces");
  }
  if (a.blocks.empty()) return 1.0;
  int same = 0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    same += a.blocks[i].i1 == b.blocks[i].i1;
    same += a.blocks[i].i2 == b.blocks[i].i2;
    same += a.blocks[i].o1 == b.blocks[i].o1;
    same += a.blocks[i].o2 == b.blocks[i].o2;
  }
  return static_cast<double>(same) / (4.0 * static_cast<double>(a.blocks.size()));
}

double MaturityModel::MaturityBeforeFinetune(double parent_maturity,
                                             const CellSpec& parent,
                                             const CellSpec& child) const {
  return std::clamp(parent_maturity, 0.0, 1.0) * SharedTokenFraction(parent, child);
}

double MaturityModel::Inherit(double parent_maturity, const CellSpec& parent,
                              const CellSpec& child) const {
  return std::min(1.0, MaturityBeforeFinetune(parent_maturity, parent, child) +
                           finetune_epochs / full_epochs);
}

double Evaluate(const FitnessOracle& oracle, const MaturityModel& model,
                const CellSpec& cell, double maturity, Rng& noise) {
  if (auto v = Validate(cell, oracle.space())) {
    throw std::invalid_argument("cannot evaluate invalid cell: " + v->message);
  }
  const double z = std::normal_distribution<double>(0.0, 1.0)(noise);
  const double observed =
      oracle.TrueFitness(cell) * model.Factor(maturity) + model.noise_sigma * z;
  return std::clamp(observed, 0.0, kMaxObservedFitness);
}

// --- Landscape ------------------------------------------------------------

double Logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Landscape::Landscape(const SpaceConfig& space, std::uint64_t seed,
                     const LandscapeParams& params)
    : space_(space), seed_(seed), params_(params) {
  space.Check();
  if (!(params.scale > 0.0)) {
    throw std::invalid_argument("landscape scale must be positive");
  }
  const int k = space.num_ops;
  const int nb = space.num_blocks;
  Rng rng = MakeStream(seed, 0x1a4d5ca9e);
  std::normal_distribution<double> unit(0.0, 1.0);
  op_quality_.resize(k);
  for (double& q : op_quality_) q = params.op_quality_std * unit(rng);
  for (int b = 1; b <= nb; ++b) {
    std::vector<double> pair(k * k);
    for (double& v : pair) v = params.op_pair_std * unit(rng);
    op_pair_.push_back(std::move(pair));
    std::vector<double> in(NumInputChoices(b) * NumInputChoices(b));
    for (double& v : in) v = params.input_std * unit(rng);
    input_.push_back(std::move(in));
  }
  for (int b = 1; b < nb; ++b) {
    std::vector<double> ch(k * k * k * k);
    for (double& v : ch) v = params.chain_std * unit(rng);
    chain_.push_back(std::move(ch));
  }
  SolveExtremes();
}

double Landscape::OpTerm(int block, int op_state) const {
  const int k = space_.num_ops;
  return op_quality_[op_state / k] + op_quality_[op_state % k] +
         op_pair_[block - 1][op_state];
}

double Landscape::InputTerm(int block, int input_state) const {
  return input_[block - 1][input_state];
}

double Landscape::ChainTerm(int block, int op_state, int next_op_state) const {
  const int kk = space_.num_ops * space_.num_ops;
  return chain_[block - 1][op_state * kk + next_op_state];
}

namespace {

template <class DigitAt>
double RawFromDigits(int num_blocks, int num_ops, DigitAt digit,
                     const auto& op_term, const auto& input_term,
                     const auto& chain_term) {
  double sum = 0.0;
  int prev_ops = -1;
  for (int b = 1; b <= num_blocks; ++b) {
    const int base = 4 * (b - 1);
    const int in_state = digit(base) * NumInputChoices(b) + digit(base + 1);
    const int op_state = digit(base + 2) * num_ops + digit(base + 3);
    sum += op_term(b, op_state) + input_term(b, in_state);
    if (prev_ops >= 0) sum += chain_term(b - 1, prev_ops, op_state);
    prev_ops = op_state;
  }
  return sum;
}

}  // namespace

double Landscape::RawScore(const CellSpec& cell) const {
  if (auto v = Validate(cell, space_)) {
    throw std::invalid_argument("landscape: " + v->message);
  }
  const std::vector<int> d = Digits(cell);
  const double sum = RawFromDigits(
      space_.num_blocks, space_.num_ops, [&](int i) { return d[i]; },
      [this](int b, int s) { return OpTerm(b, s); },
      [this](int b, int s) { return InputTerm(b, s); },
      [this](int b, int s, int t) { return ChainTerm(b, s, t); });
  return params_.scale * sum;
}

double Landscape::RawScoreAt(std::uint64_t index) const {
  const int nb = space_.num_blocks;
  const auto k = static_cast<std::uint64_t>(space_.num_ops);
  std::vector<int> d(4 * nb);
  for (int b = nb; b >= 1; --b) {
    const auto in = static_cast<std::uint64_t>(NumInputChoices(b));
    const std::array<std::uint64_t, 4> radix = {in, in, k, k};
    for (int f = 3; f >= 0; --f) {
      d[4 * (b - 1) + f] = static_cast<int>(index % radix[f]);
      index /= radix[f];
    }
  }
  const double sum = RawFromDigits(
      nb, space_.num_ops, [&](int i) { return d[i]; },
      [this](int b, int s) { return OpTerm(b, s); },
      [this](int b, int s) { return InputTerm(b, s); },
      [this](int b, int s, int t) { return ChainTerm(b, s, t); });
  return params_.scale * sum;
}

void Landscape::SolveExtremes() {
  const int nb = space_.num_blocks;
  const int k = space_.num_ops;
  const int kk = k * k;

  // Op states form a chain; Viterbi for max (with back-pointers) and min.
  std::vector<double> best(kk), worst(kk);
  std::vector<std::vector<int>> back(nb + 1, std::vector<int>(kk, 0));
  for (int s = 0; s < kk; ++s) best[s] = worst[s] = OpTerm(1, s);
  for (int b = 2; b <= nb; ++b) {
    std::vector<double> nbest(kk), nworst(kk);
    for (int t = 0; t < kk; ++t) {
      double hi = -std::numeric_limits<double>::infinity();
      double lo = std::numeric_limits<double>::infinity();
      for (int s = 0; s < kk; ++s) {
        const double c = ChainTerm(b - 1, s, t);
        if (best[s] + c > hi) {
          hi = best[s] + c;
          back[b][t] = s;
        }
        lo = std::min(lo, worst[s] + c);
      }
      nbest[t] = hi + OpTerm(b, t);
      nworst[t] = lo + OpTerm(b, t);
    }
    best.swap(nbest);
    worst.swap(nworst);
  }
  const auto top = std::max_element(best.begin(), best.end());
  double max_sum = *top;
  double min_sum = *std::min_element(worst.begin(), worst.end());
  std::vector<int> op_states(nb + 1);
  op_states[nb] = static_cast<int>(top - best.begin());
  for (int b = nb; b >= 2; --b) op_states[b - 1] = back[b][op_states[b]];

  argmax_ = CellSpec{};
  argmax_.num_ops = k;
  for (int b = 1; b <= nb; ++b) {
    const auto& in = input_[b - 1];
    const auto hi = std::max_element(in.begin(), in.end());
    max_sum += *hi;
    min_sum += *std::min_element(in.begin(), in.end());
    const int in_state = static_cast<int>(hi - in.begin());
    const int choices = NumInputChoices(b);
    const auto input_of = [](int digit) {
      return digit < 2 ? InputRef::FromValue(digit - 2) : InputRef::Block(digit - 1);
    };
    argmax_.blocks.push_back(BlockSpec{
        input_of(in_state / choices), input_of(in_state % choices),
        static_cast<Op>(op_states[b] / k), static_cast<Op>(op_states[b] % k)});
  }
  max_raw_ = params_.scale * max_sum;
  min_raw_ = params_.scale * min_sum;
}

LandscapeOracle::LandscapeOracle(Landscape landscape)
    : landscape_(std::move(landscape)),
      lo_(Logistic(landscape_.MinRaw())),
      hi_(Logistic(landscape_.MaxRaw())) {}

double LandscapeOracle::TrueFitness(const CellSpec& cell) const {
  return Rescale(Logistic(landscape_.RawScore(cell)), lo_, hi_);
}

std::string LandscapeOracle::Describe() const {
  return "landscape(blocks=" + std::to_string(space().num_blocks) +
         ", ops=" + std::to_string(space().num_ops) +
         ", seed=" + std::to_string(landscape_.seed()) + ")";
}

// --- TabularOracle ---------------------------------------------------------

TabularOracle TabularOracle::Build(const SpaceConfig& space, std::uint64_t seed,
                                   Execution exec,
                                   const LandscapeParams& params,
                                   std::uint64_t cap) {
  const CellEnumerator sizing(space, cap);
  const auto n = static_cast<std::int64_t>(sizing.size());
  const Landscape landscape(space, seed, params);
  std::vector<double> table(n);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      table[i] = Logistic(landscape.RawScoreAt(static_cast<std::uint64_t>(i)));
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      table[i] = Logistic(landscape.RawScoreAt(static_cast<std::uint64_t>(i)));
    }
  }
  const auto [lo, hi] = std::minmax_element(table.begin(), table.end());
  const double vlo = *lo;
  const double vhi = *hi;
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) table[i] = Rescale(table[i], vlo, vhi);
  } else {
    for (std::int64_t i = 0; i < n; ++i) table[i] = Rescale(table[i], vlo, vhi);
  }
  return TabularOracle(space, seed, std::move(table));
}

TabularOracle::TabularOracle(const SpaceConfig& space, std::uint64_t seed,
                             std::vector<double> table)
    : space_(space), seed_(seed), table_(std::move(table)) {
  space.Check();
  if (SpaceSize(space) != table_.size() || table_.empty()) {
    throw std::invalid_argument("table size does not match the search space");
  }
  argmax_ = static_cast<std::uint64_t>(
      std::max_element(table_.begin(), table_.end()) - table_.begin());
}

double TabularOracle::TrueFitness(const CellSpec& cell) const {
  if (auto v = Validate(cell, space_)) {
    throw std::invalid_argument("tabular oracle: " + v->message);
  }
  return table_[CellIndex(cell)];
}

std::string TabularOracle::Describe() const {
  return "tabular(blocks=" + std::to_string(space_.num_blocks) +
         ", ops=" + std::to_string(space_.num_ops) +
         ", seed=" + std::to_string(seed_) +
         ", cells=" + std::to_string(table_.size()) + ")";
}

void TabularOracle::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "renas-tabular " << kFileVersion << '\n'
      << "blocks " << space_.num_blocks << " ops " << space_.num_ops
      << " landscape_seed " << seed_ << " cells " << table_.size() << '\n';
  CellEnumerator cells(space_, std::numeric_limits<std::uint64_t>::max());
  std::uint64_t i = 0;
  while (auto cell = cells.Next()) {
    out << i << ' ' << ToText(*cell) << ' ' << FormatDouble(table_[i]) << '\n';
    ++i;
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

TabularOracle TabularOracle::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "renas-tabular" || version != kFileVersion) {
    throw std::runtime_error(path.string() + ": not a version-1 tabular oracle");
  }
  std::string k1, k2, k3, k4;
  SpaceConfig space;
  std::uint64_t seed = 0, cells = 0;
  in >> k1 >> space.num_blocks >> k2 >> space.num_ops >> k3 >> seed >> k4 >> cells;
  if (!in || k1 != "blocks" || k2 != "ops" || k3 != "landscape_seed" || k4 != "cells") {
    throw std::runtime_error(path.string() + ": malformed header");
  }
  space.Check();
  if (SpaceSize(space) != cells) {
    throw std::runtime_error(path.string() + ": cell count does not match space");
  }
  std::vector<double> table(cells);
  std::string text, value;
  for (std::uint64_t i = 0; i < cells; ++i) {
    std::uint64_t index = 0;
    if (!(in >> index >> text >> value)) {
      throw std::runtime_error(path.string() + ": truncated at entry " + std::to_string(i));
    }
    CellSpec cell;
    try {
      cell = ParseCell(text, space.num_ops);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
    if (index != i || cell.num_blocks() != space.num_blocks || CellIndex(cell) != i) {
      throw std::runtime_error(path.string() + ": entry " + std::to_string(i) + " out of order");
    }
    table[i] = ParseDouble(value);
  }
  return TabularOracle(space, seed, std::move(table));
}

void TabularOracle::ExportCsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "index,cell,fitness\n";
  CellEnumerator cells(space_, std::numeric_limits<std::uint64_t>::max());
  std::uint64_t i = 0;
  while (auto cell = cells.Next()) {
    out << i << ',' << ToText(*cell) << ',' << FormatDouble(table_[i]) << '\n';
    ++i;
  }
}

}  // namespace renas
