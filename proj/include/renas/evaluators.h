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

// Fitness oracles standing in for child-network training, plus the maturity
// surrogate for parameter inheritance and fine-tuning.

#ifndef RENAS_EVALUATORS_H_
#define RENAS_EVALUATORS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "renas/arch_space.h"
#include "renas/rng.h"

namespace renas {

inline constexpr double kMaxObservedFitness = 0.999;
inline constexpr double kLandscapeLow = 0.05;
inline constexpr double kLandscapeHigh = 0.95;

// Scalar stand-in for how much trained state a model carries. Maturity m in
// [0, 1] means m * full_epochs epochs of effective training; observed
// fitness is scaled by 1 - exp(-m * full_epochs / tau).
struct MaturityModel {
  double tau = 3.0;
  double full_epochs = 20.0;
  double finetune_epochs = 1.0;
  double noise_sigma = 0.01;
  double initial_maturity = 1.0;

  void Check() const;
  double Factor(double maturity) const;
  // Parent maturity times the fraction of the 4#B variable tokens the
  // child shares with the parent. Throws std::invalid_argument when the two
  // cells come from different spaces.
  double MaturityBeforeFinetune(double parent_maturity, const CellSpec& parent,
                                const CellSpec& child) const;
  // MaturityBeforeFinetune plus one fine-tuning pass, capped at 1.
  double Inherit(double parent_maturity, const CellSpec& parent,
                 const CellSpec& child) const;
  // Abstract epoch units spent to evaluate a child.
  double Cost(bool inherited) const { return inherited ? finetune_epochs : full_epochs; }
};

// Fraction of the 4#B variable tokens equal in both cells.
double SharedTokenFraction(const CellSpec& a, const CellSpec& b);

class FitnessOracle {
 public:
  virtual ~FitnessOracle() = default;

  virtual const SpaceConfig& space() const = 0;
  // Noise-free fitness of a fully trained model, in [0, 1).
  virtual double TrueFitness(const CellSpec& cell) const = 0;
  // Best true fitness over the space, when known.
  virtual std::optional<double> Optimum() const { return std::nullopt; }
  virtual std::optional<CellSpec> OptimalCell() const { return std::nullopt; }
  virtual std::string Describe() const = 0;
};

// clamp(true * Factor(maturity) + N(0, sigma^2), 0, 0.999). Always draws
// one normal variate so noise streams stay aligned across settings.
// Throws std::invalid_argument for cells outside the oracle's space.
double Evaluate(const FitnessOracle& oracle, const MaturityModel& model,
                const CellSpec& cell, double maturity, Rng& noise);

struct LandscapeParams {
  double op_quality_std = 1.0;  // shared per-op quality, all blocks
  double op_pair_std = 0.5;     // per-block (o1, o2) term
  double input_std = 0.5;       // per-block (i1, i2) term
  double chain_std = 0.5;       // ops of block b against ops of block b+1
  double scale = 0.3;           // multiplies the raw sum before the logistic
};

// Seeded additive-plus-pairwise score:
//   raw = scale * (sum_b [q(o1) + q(o2) + v_b(o1,o2) + r_b(i1,i2)]
//                  + sum_{b<B} u_b((o1,o2)_b, (o1,o2)_{b+1}))
// fitness = affine map of logistic(raw) onto [0.05, 0.95].
class Landscape {
 public:
  Landscape(const SpaceConfig& space, std::uint64_t seed,
            const LandscapeParams& params = {});

  const SpaceConfig& space() const { return space_; }
  std::uint64_t seed() const { return seed_; }
  double RawScore(const CellSpec& cell) const;
  // Same as RawScore(CellAt(space, index)) without materializing the cell.
  double RawScoreAt(std::uint64_t index) const;
  // Extremes of RawScore over the whole space by dynamic programming over
  // the block chain.
  double MinRaw() const { return min_raw_; }
  double MaxRaw() const { return max_raw_; }
  const CellSpec& ArgmaxCell() const { return argmax_; }

 private:
  double OpTerm(int block, int op_state) const;
  double InputTerm(int block, int input_state) const;
  double ChainTerm(int block, int op_state, int next_op_state) const;
  void SolveExtremes();

  SpaceConfig space_;
  std::uint64_t seed_;
  LandscapeParams params_;
  std::vector<double> op_quality_;
  std::vector<std::vector<double>> op_pair_;   // [b][o1 * K + o2]
  std::vector<std::vector<double>> input_;     // [b][d1 * (b+1) + d2]
  std::vector<std::vector<double>> chain_;     // [b][s_b * K^2 + s_{b+1}]
  double min_raw_ = 0.0;
  double max_raw_ = 0.0;
  CellSpec argmax_;
};

double Logistic(double x);

// Landscape evaluated on demand; exact rescaling from the DP extremes, so it
// works for spaces too large to enumerate.
class LandscapeOracle final : public FitnessOracle {
 public:
  explicit LandscapeOracle(Landscape landscape);

  const SpaceConfig& space() const override { return landscape_.space(); }
  double TrueFitness(const CellSpec& cell) const override;
  std::optional<double> Optimum() const override { return kLandscapeHigh; }
  std::optional<CellSpec> OptimalCell() const override { return landscape_.ArgmaxCell(); }
  std::string Describe() const override;
  const Landscape& landscape() const { return landscape_; }

 private:
  Landscape landscape_;
  double lo_;
  double hi_;
};

enum class Execution { kSerial, kParallel };

// Whole reduced space tabulated: table[CellIndex(cell)] = true fitness.
class TabularOracle final : public FitnessOracle {
 public:
  inline static constexpr int kFileVersion = 1;

  // Enumerates the space (<= cap cells) and tabulates the landscape,
  // rescaled by the scanned extremes. Both execution modes produce
  // identical tables. Throws std::length_error when the space is too big.
  static TabularOracle Build(const SpaceConfig& space, std::uint64_t seed,
                             Execution exec = Execution::kParallel,
                             const LandscapeParams& params = {},
                             std::uint64_t cap = kDefaultEnumerationCap);
  // Throws std::invalid_argument when the table does not cover the space.
  TabularOracle(const SpaceConfig& space, std::uint64_t seed,
                std::vector<double> table);

  const SpaceConfig& space() const override { return space_; }
  double TrueFitness(const CellSpec& cell) const override;
  std::optional<double> Optimum() const override { return table_[argmax_]; }
  std::optional<CellSpec> OptimalCell() const override { return CellAt(space_, argmax_); }
  std::string Describe() const override;

  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& table() const { return table_; }
  std::uint64_t argmax_index() const { return argmax_; }

  // Text file: header lines "renas-tabular 1" and
  // "blocks B ops K landscape_seed S cells N", then "index cell fitness"
  // per line with round-trip precision.
  void Save(const std::filesystem::path& path) const;
  // Throws std::runtime_error on malformed or inconsistent files.
  static TabularOracle Load(const std::filesystem::path& path);
  // CSV "index,cell,fitness".
  void ExportCsv(const std::filesystem::path& path) const;

 private:
  SpaceConfig space_;
  std::uint64_t seed_;
  std::vector<double> table_;
  std::uint64_t argmax_ = 0;
};

}  // namespace renas

#endif  // RENAS_EVALUATORS_H_
