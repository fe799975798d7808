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

#include "renas/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace renas::nn {

GradcheckResult Gradcheck(const std::function<double()>& f,
                          const NamedTensors& params,
                          const ConstNamedTensors& analytic, double h,
                          double abs_floor) {
  if (params.size() != analytic.size()) {
    throw std::invalid_argument("gradcheck: parameter/gradient count mismatch");
  }
  GradcheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor2& p = *params[k].second;
    const Tensor2& g = *analytic[k].second;
    if (!p.SameShape(g)) {
      throw std::invalid_argument("gradcheck: shape mismatch for " +
                                  params[k].first);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + h;
      const double fp = f();
      p[i] = saved - h;
      const double fm = f();
      p[i] = saved;
      const double numeric = (fp - fm) / (2.0 * h);
      const double a = g[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), abs_floor});
      const double err = std::abs(a - numeric) / denom;
      ++result.checked;
      if (err > result.max_rel_error || !std::isfinite(err)) {
        result.max_rel_error = err;
        result.worst = params[k].first + "[" + std::to_string(i) + "]";
      }
    }
  }
  return result;
}

}  // namespace renas::nn
