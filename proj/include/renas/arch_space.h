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

// Cell/block genotype space: blocks of (i1, i2, o1, o2) with a fixed
// addition combiner, the 5#B-token encoding consumed by the controller,
// validation, random sampling, enumeration and the cardinality formula.

#ifndef RENAS_ARCH_SPACE_H_
#define RENAS_ARCH_SPACE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "renas/rng.h"

namespace renas {

inline constexpr int kNumOpChoices = 6;
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

enum class Op : int {
  kSep3 = 0,
  kSep5 = 1,
  kSep7 = 2,
  kAvg3 = 3,
  kMax3 = 4,
  kIdent = 5,
};

// "SEP3", "SEP5", ... Throws std::invalid_argument for codes outside 0..5.
std::string_view OpName(Op op);
std::optional<Op> ParseOp(std::string_view name);

// Input of a block: the output of the cell two back (-2), one back (-1),
// or an earlier block k >= 1 of the same cell.
class InputRef {
 public:
  static constexpr int kPrev2 = -2;
  static constexpr int kPrev1 = -1;

  constexpr InputRef() = default;
  static constexpr InputRef Prev2() { return InputRef(kPrev2); }
  static constexpr InputRef Prev1() { return InputRef(kPrev1); }
  static constexpr InputRef Block(int k) { return InputRef(k); }
  // Raw tag as serialized: -2, -1 or k.
  static constexpr InputRef FromValue(int v) { return InputRef(v); }

  constexpr int value() const { return value_; }
  constexpr bool is_block() const { return value_ >= 1; }

  friend constexpr bool operator==(InputRef, InputRef) = default;
  friend constexpr auto operator<=>(InputRef, InputRef) = default;

 private:
  explicit constexpr InputRef(int v) : value_(v) {}
  int value_ = kPrev1;
};

struct BlockSpec {
  InputRef i1;
  InputRef i2;
  Op o1 = Op::kSep3;
  Op o2 = Op::kSep3;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

struct SpaceConfig {
  int num_blocks = 5;
  int num_ops = kNumOpChoices;
  // Network-level metadata; fixed during search and not part of the genotype.
  int num_cells = 2;
  int num_filters = 24;

  // Throws std::invalid_argument unless num_blocks >= 1 and 2 <= num_ops <= 6.
  void Check() const;
  friend bool operator==(const SpaceConfig& a, const SpaceConfig& b) {
    return a.num_blocks == b.num_blocks && a.num_ops == b.num_ops;
  }
};

struct CellSpec {
  std::vector<BlockSpec> blocks;
  int num_ops = kNumOpChoices;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  friend bool operator==(const CellSpec&, const CellSpec&) = default;
};

// Number of legal inputs for (1-based) block b: b-1 earlier blocks + 2 cells.
constexpr int NumInputChoices(int block) { return block + 1; }
bool IsLegalInput(InputRef ref, int block);

enum class Field { kNumBlocks, kNumOps, kI1, kI2, kO1, kO2 };
std::string_view FieldName(Field f);

struct Violation {
  int block = 0;  // 1-based; 0 for cell-level violations
  Field field = Field::kNumBlocks;
  std::string message;
};

// Returns the first violation in block order, or nullopt if the cell is valid.
std::optional<Violation> Validate(const CellSpec& cell, const SpaceConfig& cfg);

// Uniform over the legal choices of every field.
CellSpec RandomCell(const SpaceConfig& cfg, Rng& rng);

// --- Token encoding -------------------------------------------------------
//
// Per block: [i1, i2, o1, o2, ADD]. Vocabulary:
//   input -2 -> 0, input -1 -> 1, block k -> 1 + k,
//   op m -> 2 + #B + m (m in 0..5), ADD -> 2 + #B + 6.
// The layout is fixed so logged runs stay replayable.

inline constexpr int kTokensPerBlock = 5;
constexpr int VocabSize(int num_blocks) { return 2 + num_blocks + 7; }
constexpr int InputToken(InputRef ref) { return ref.value() < 0 ? ref.value() + 2 : 1 + ref.value(); }
constexpr int OpToken(Op op, int num_blocks) { return 2 + num_blocks + static_cast<int>(op); }
constexpr int CombinerToken(int num_blocks) { return 2 + num_blocks + kNumOpChoices; }

// Throws std::invalid_argument for invalid cells.
std::vector<int> EncodeTokens(const CellSpec& cell);
// Throws std::invalid_argument on bad length, out-of-vocabulary ids, ids in
// the wrong slot, or an invalid decoded cell.
CellSpec DecodeTokens(std::span<const int> tokens, const SpaceConfig& cfg);

// --- Canonical text form: "-2,-1,SEP3,IDENT|1,-1,MAX3,SEP5" ----------------

std::string ToText(const CellSpec& cell);
// Throws std::invalid_argument on malformed text or an invalid cell.
CellSpec ParseCell(std::string_view text, int num_ops);

// --- Cardinality and enumeration -----------------------------------------

using BigInt = boost::multiprecision::cpp_int;

// (num_ops^#B * prod_{b=1..#B} (b+1))^2, exact.
BigInt SpaceSize(const SpaceConfig& cfg);

// Mixed-radix rank of a cell; ordering matches lexicographic token order.
// Requires SpaceSize(cfg) to fit in 64 bits.
std::uint64_t CellIndex(const CellSpec& cell);
CellSpec CellAt(const SpaceConfig& cfg, std::uint64_t index);

// Yields every valid cell once, in lexicographic token order.
class CellEnumerator {
 public:
  // Throws std::length_error when SpaceSize(cfg) > cap.
  explicit CellEnumerator(const SpaceConfig& cfg,
                          std::uint64_t cap = kDefaultEnumerationCap);

  std::uint64_t size() const { return size_; }
  // Next cell, or nullopt once exhausted.
  std::optional<CellSpec> Next();

 private:
  SpaceConfig cfg_;
  std::uint64_t size_ = 0;
  std::uint64_t next_ = 0;
  CellSpec current_;
};

}  // namespace renas

#endif  // RENAS_ARCH_SPACE_H_
