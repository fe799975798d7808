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

#include "renas/arch_space.h"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace renas {

namespace {

constexpr std::array<std::string_view, kNumOpChoices> kOpNames = {
    "SEP3", "SEP5", "SEP7", "AVG3", "MAX3", "IDENT"};

bool OpInRange(Op op, int num_ops) {
  const int code = static_cast<int>(op);
  return code >= 0 && code < num_ops;
}

// Radices of the four variable fields of block b, in token order.
std::array<std::uint64_t, 4> Radices(int block, int num_ops) {
  const auto in = static_cast<std::uint64_t>(NumInputChoices(block));
  const auto ops = static_cast<std::uint64_t>(num_ops);
  return {in, in, ops, ops};
}

// Digit of an input within its block: prev2 -> 0, prev1 -> 1, block k -> 1 + k.
int InputDigit(InputRef ref) { return InputToken(ref); }
InputRef InputFromDigit(int d) {
  return d < 2 ? InputRef::FromValue(d - 2) : InputRef::Block(d - 1);
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string_view OpName(Op op) {
  const int code = static_cast<int>(op);
  if (code < 0 || code >= kNumOpChoices) {
    throw std::invalid_argument("op code out of range: " + std::to_string(code));
  }
  return kOpNames[code];
}

std::optional<Op> ParseOp(std::string_view name) {
  for (int m = 0; m < kNumOpChoices; ++m) {
    if (kOpNames[m] == name) return static_cast<Op>(m);
  }
  return std::nullopt;
}

void SpaceConfig::Check() const {
  if (num_blocks < 1) {
    throw std::invalid_argument("num_blocks must be >= 1");
  }
  if (num_ops < 2 || num_ops > kNumOpChoices) {
    throw std::invalid_argument("num_ops must be in [2, 6]");
  }
}

bool IsLegalInput(InputRef ref, int block) {
  const int v = ref.value();
  return v == InputRef::kPrev2 || v == InputRef::kPrev1 ||
         (v >= 1 && v <= block - 1);
}

std::string_view FieldName(Field f) {
  switch (f) {
    case Field::kNumBlocks: return "num_blocks";
    case Field::kNumOps: return "num_ops";
    case Field::kI1: return "i1";
    case Field::kI2: return "i2";
    case Field::kO1: return "o1";
    case Field::kO2: return "o2";
  }
  return "?";
}

std::optional<Violation> Validate(const CellSpec& cell, const SpaceConfig& cfg) {
  if (cell.num_blocks() != cfg.num_blocks || cfg.num_blocks < 1) {
    return Violation{0, Field::kNumBlocks,
                     "cell has " + std::to_string(cell.num_blocks()) +
                         " blocks, config expects " +
                         std::to_string(cfg.num_blocks)};
  }
  if (cell.num_ops != cfg.num_ops || cfg.num_ops < 2 ||
      cfg.num_ops > kNumOpChoices) {
    return Violation{0, Field::kNumOps,
                     "cell uses " + std::to_string(cell.num_ops) +
                         " ops, config expects " + std::to_string(cfg.num_ops)};
  }
  for (int b = 1; b <= cell.num_blocks(); ++b) {
    const BlockSpec& blk = cell.blocks[b - 1];
    const auto bad_input = [b](Field f, InputRef r) {
      return Violation{b, f,
                       "input " + std::to_string(r.value()) +
                           " not legal in block " + std::to_string(b)};
    };
    const auto bad_op = [b](Field f, Op op) {
      return Violation{b, f,
                       "op code " + std::to_string(static_cast<int>(op)) +
                           " outside active op set"};
    };
    if (!IsLegalInput(blk.i1, b)) return bad_input(Field::kI1, blk.i1);
    if (!IsLegalInput(blk.i2, b)) return bad_input(Field::kI2, blk.i2);
    if (!OpInRange(blk.o1, cfg.num_ops)) return bad_op(Field::kO1, blk.o1);
    if (!OpInRange(blk.o2, cfg.num_ops)) return bad_op(Field::kO2, blk.o2);
  }
  return std::nullopt;
}

CellSpec RandomCell(const SpaceConfig& cfg, Rng& rng) {
  cfg.Check();
  CellSpec cell;
  cell.num_ops = cfg.num_ops;
  cell.blocks.reserve(cfg.num_blocks);
  for (int b = 1; b <= cfg.num_blocks; ++b) {
    BlockSpec blk;
    blk.i1 = InputFromDigit(UniformIndex(rng, NumInputChoices(b)));
    blk.i2 = InputFromDigit(UniformIndex(rng, NumInputChoices(b)));
    blk.o1 = static_cast<Op>(UniformIndex(rng, cfg.num_ops));
    blk.o2 = static_cast<Op>(UniformIndex(rng, cfg.num_ops));
    cell.blocks.push_back(blk);
  }
  return cell;
}

std::vector<int> EncodeTokens(const CellSpec& cell) {
  const SpaceConfig cfg{cell.num_blocks(), cell.num_ops};
  if (auto v = Validate(cell, cfg)) {
    throw std::invalid_argument("cannot encode invalid cell: " + v->message);
  }
  const int nb = cell.num_blocks();
  std::vector<int> tokens;
  tokens.reserve(kTokensPerBlock * nb);
  for (const BlockSpec& blk : cell.blocks) {
    tokens.push_back(InputToken(blk.i1));
    tokens.push_back(InputToken(blk.i2));
    tokens.push_back(OpToken(blk.o1, nb));
    tokens.push_back(OpToken(blk.o2, nb));
    tokens.push_back(CombinerToken(nb));
  }
  return tokens;
}

CellSpec DecodeTokens(std::span<const int> tokens, const SpaceConfig& cfg) {
  cfg.Check();
  const int nb = cfg.num_blocks;
  if (tokens.size() != static_cast<std::size_t>(kTokensPerBlock * nb)) {
    throw std::invalid_argument("token sequence length " +
                                std::to_string(tokens.size()) + ", expected " +
                                std::to_string(kTokensPerBlock * nb));
  }
  const int vocab = VocabSize(nb);
  const int op_base = 2 + nb;
  const auto decode_input = [&](int id) {
    if (id < 0 || id >= op_base) {
      throw std::invalid_argument("token " + std::to_string(id) +
                                  " is not an input id");
    }
    return InputFromDigit(id);
  };
  const auto decode_op = [&](int id) {
    if (id < op_base || id >= op_base + kNumOpChoices) {
      throw std::invalid_argument("token " + std::to_string(id) +
                                  " is not an op id");
    }
    return static_cast<Op>(id - op_base);
  };
  CellSpec cell;
  cell.num_ops = cfg.num_ops;
  for (int b = 0; b < nb; ++b) {
    const auto* t = tokens.data() + kTokensPerBlock * b;
    for (int k = 0; k < kTokensPerBlock; ++k) {
      if (t[k] < 0 || t[k] >= vocab) {
        throw std::invalid_argument("token id " + std::to_string(t[k]) +
                                    " outside vocabulary");
      }
    }
    if (t[4] != CombinerToken(nb)) {
      throw std::invalid_argument("expected combiner token in block " +
                                  std::to_string(b + 1));
    }
    cell.blocks.push_back(BlockSpec{decode_input(t[0]), decode_input(t[1]),
                                    decode_op(t[2]), decode_op(t[3])});
  }
  if (auto v = Validate(cell, cfg)) {
    throw std::invalid_argument("decoded cell invalid: " + v->message);
  }
  return cell;
}

std::string ToText(const CellSpec& cell) {
  std::string out;
  for (std::size_t b = 0; b < cell.blocks.size(); ++b) {
    const BlockSpec& blk = cell.blocks[b];
    if (b > 0) out += '|';
    out += std::to_string(blk.i1.value());
    out += ',';
    out += std::to_string(blk.i2.value());
    out += ',';
    out += OpName(blk.o1);
    out += ',';
    out += OpName(blk.o2);
  }
  return out;
}

CellSpec ParseCell(std::string_view text, int num_ops) {
  const auto parse_int = [](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("bad input index '" + std::string(s) + "'");
    }
    return v;
  };
  const auto parse_op = [](std::string_view s) {
    auto op = ParseOp(s);
    if (!op) throw std::invalid_argument("unknown op '" + std::string(s) + "'");
    return *op;
  };
  if (text.empty()) throw std::invalid_argument("empty cell text");
  CellSpec cell;
  cell.num_ops = num_ops;
  for (std::string_view block_text : Split(text, '|')) {
    const auto fields = Split(block_text, ',');
    if (fields.size() != 4) {
      throw std::invalid_argument("block '" + std::string(block_text) +
                                  "' must have 4 fields");
    }
    cell.blocks.push_back(BlockSpec{InputRef::FromValue(parse_int(fields[0])),
                                    InputRef::FromValue(parse_int(fields[1])),
                                    parse_op(fields[2]), parse_op(fields[3])});
  }
  const SpaceConfig cfg{cell.num_blocks(), num_ops};
  if (auto v = Validate(cell, cfg)) {
    throw std::invalid_argument("invalid cell '" + std::string(text) +
                                "': " + v->message);
  }
  return cell;
}

BigInt SpaceSize(const SpaceConfig& cfg) {
  BigInt per_node = 1;
  for (int b = 1; b <= cfg.num_blocks; ++b) {
    per_node *= cfg.num_ops;
    per_node *= NumInputChoices(b);
  }
  return per_node * per_node;
}

std::uint64_t CellIndex(const CellSpec& cell) {
  std::uint64_t index = 0;
  for (int b = 1; b <= cell.num_blocks(); ++b) {
    const BlockSpec& blk = cell.blocks[b - 1];
    const auto radix = Radices(b, cell.num_ops);
    const std::array<std::uint64_t, 4> digits = {
        static_cast<std::uint64_t>(InputDigit(blk.i1)),
        static_cast<std::uint64_t>(InputDigit(blk.i2)),
        static_cast<std::uint64_t>(blk.o1),
        static_cast<std::uint64_t>(blk.o2)};
    for (int k = 0; k < 4; ++k) index = index * radix[k] + digits[k];
  }
  return index;
}

CellSpec CellAt(const SpaceConfig& cfg, std::uint64_t index) {
  CellSpec cell;
  cell.num_ops = cfg.num_ops;
  cell.blocks.resize(cfg.num_blocks);
  for (int b = cfg.num_blocks; b >= 1; --b) {
    const auto radix = Radices(b, cfg.num_ops);
    std::array<int, 4> digits{};
    for (int k = 3; k >= 0; --k) {
      digits[k] = static_cast<int>(index % radix[k]);
      index /= radix[k];
    }
    cell.blocks[b - 1] = BlockSpec{InputFromDigit(digits[0]),
                                   InputFromDigit(digits[1]),
                                   static_cast<Op>(digits[2]),
                                   static_cast<Op>(digits[3])};
  }
  if (index != 0) throw std::out_of_range("cell index beyond space size");
  return cell;
}

CellEnumerator::CellEnumerator(const SpaceConfig& cfg, std::uint64_t cap)
    : cfg_(cfg) {
  cfg.Check();
  const BigInt total = SpaceSize(cfg);
  if (total > cap) {
    std::ostringstream msg;
    msg << "space of " << total << " cells exceeds enumeration cap " << cap;
    throw std::length_error(msg.str());
  }
  size_ = total.convert_to<std::uint64_t>();
}

std::optional<CellSpec> CellEnumerator::Next() {
  if (next_ >= size_) return std::nullopt;
  if (next_ == 0) {
    current_ = CellAt(cfg_, 0);
  } else {
    // Odometer step: the last token position varies fastest.
    for (int b = cfg_.num_blocks; b >= 1; --b) {
      BlockSpec& blk = current_.blocks[b - 1];
      const auto radix = Radices(b, cfg_.num_ops);
      std::array<int, 4> d = {InputDigit(blk.i1), InputDigit(blk.i2),
                              static_cast<int>(blk.o1),
                              static_cast<int>(blk.o2)};
      int k = 3;
      for (; k >= 0; --k) {
        if (++d[k] < static_cast<int>(radix[k])) break;
        d[k] = 0;
      }
      blk = BlockSpec{InputFromDigit(d[0]), InputFromDigit(d[1]),
                      static_cast<Op>(d[2]), static_cast<Op>(d[3])};
      if (k >= 0) break;
    }
  }
  ++next_;
  return current_;
}

}  // namespace renas
