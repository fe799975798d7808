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

#include "renas/tensor.h"

#include <cmath>
#include <stdexcept>

namespace renas::nn {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("tensor data length does not match shape");
  }
}

bool Tensor2::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor2::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor2::FillNormal(double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& v : data_) v = dist(rng);
}

double SquaredNorm(const ConstNamedTensors& tensors) {
  double s = 0.0;
  for (const auto& [name, t] : tensors) {
    for (double v : t->flat()) s += v * v;
  }
  return s;
}

Vec MatVec(const Tensor2& w, std::span<const double> x) {
  Vec y(w.rows(), 0.0);
  MatVecAdd(w, x, y);
  return y;
}

void MatVecAdd(const Tensor2& w, std::span<const double> x, std::span<double> y) {
  if (x.size() != w.cols() || y.size() != w.rows()) {
    throw std::invalid_argument("matvec shape mismatch");
  }
  const std::size_t n = w.cols();
  const double* xd = x.data();
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double* wr = w.row(r).data();
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) acc += wr[c] * xd[c];
    y[r] += acc;
  }
}

void MatTVecAdd(const Tensor2& w, std::span<const double> g, std::span<double> y) {
  if (g.size() != w.rows() || y.size() != w.cols()) {
    throw std::invalid_argument("transposed matvec shape mismatch");
  }
  const std::size_t n = w.cols();
  double* yd = y.data();
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    const double* wr = w.row(r).data();
    for (std::size_t c = 0; c < n; ++c) yd[c] += gr * wr[c];
  }
}

void OuterAdd(std::span<const double> g, std::span<const double> x, Tensor2& dw) {
  if (g.size() != dw.rows() || x.size() != dw.cols()) {
    throw std::invalid_argument("outer product shape mismatch");
  }
  const std::size_t n = dw.cols();
  const double* xd = x.data();
  for (std::size_t r = 0; r < dw.rows(); ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    double* dr = dw.row(r).data();
    for (std::size_t c = 0; c < n; ++c) dr[c] += gr * xd[c];
  }
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace renas::nn
