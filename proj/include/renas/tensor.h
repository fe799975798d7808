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

#ifndef RENAS_TENSOR_H_
#define RENAS_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "renas/rng.h"

namespace renas::nn {

using Vec = std::vector<double>;

// Dense row-major matrix of doubles. Column vectors are rows x 1.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // Throws std::invalid_argument if data.size() != rows * cols.
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool SameShape(const Tensor2& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool AllFinite() const;
  void Fill(double v);
  void FillNormal(double stddev, Rng& rng);

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Tensor2 ZerosLike(const Tensor2& t) { return Tensor2(t.rows(), t.cols()); }

// Named views over a parameter container, in a fixed order.
using NamedTensors = std::vector<std::pair<std::string, Tensor2*>>;
using ConstNamedTensors = std::vector<std::pair<std::string, const Tensor2*>>;

double SquaredNorm(const ConstNamedTensors& tensors);

// y = W x + b; b may be empty.
Vec MatVec(const Tensor2& w, std::span<const double> x);
void MatVecAdd(const Tensor2& w, std::span<const double> x, std::span<double> y);
// y += W^T g
void MatTVecAdd(const Tensor2& w, std::span<const double> g, std::span<double> y);
// dW += g x^T
void OuterAdd(std::span<const double> g, std::span<const double> x, Tensor2& dw);
double Dot(std::span<const double> a, std::span<const double> b);

}  // namespace renas::nn

#endif  // RENAS_TENSOR_H_
