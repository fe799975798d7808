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

#include "renas/adam.h"

#include <cmath>
#include <stdexcept>

namespace renas::nn {

void Adam::Step(const NamedTensors& params, const ConstNamedTensors& grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("adam: parameter/gradient count mismatch");
  }
  if (m_.empty()) {
    for (const auto& [name, p] : params) {
      m_.push_back(ZerosLike(*p));
      v_.push_back(ZerosLike(*p));
    }
  }
  if (m_.size() != params.size()) {
    throw std::invalid_argument("adam: parameter count changed");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!params[k].second->SameShape(*grads[k].second) ||
        !params[k].second->SameShape(m_[k])) {
      throw std::invalid_argument("adam: shape mismatch for " + params[k].first);
    }
  }
  ++steps_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k].second->flat();
    auto g = grads[k].second->flat();
    auto m = m_[k].flat();
    auto v = v_[k].flat();
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
  }
}

}  // namespace renas::nn
