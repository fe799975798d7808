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

#ifndef RENAS_GRADCHECK_H_
#define RENAS_GRADCHECK_H_

#include <functional>
#include <string>

#include "renas/tensor.h"

namespace renas::nn {

struct GradcheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // "name[index]" of the worst coordinate
  std::size_t checked = 0;
};

// Compares analytic gradients against central differences of `f` with step
// h, perturbing every coordinate of every parameter in place (and restoring
// it). Per-coordinate error is |a - n| / max(|a|, |n|, abs_floor).
GradcheckResult Gradcheck(const std::function<double()>& f,
                          const NamedTensors& params,
                          const ConstNamedTensors& analytic, double h = 1e-5,
                          double abs_floor = 1e-6);

}  // namespace renas::nn

#endif  // RENAS_GRADCHECK_H_
