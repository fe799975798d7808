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

#include "renas/reinforce.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

namespace renas {

void RewardConfig::Check() const {
  if (!(fitness_clip > 0.0 && fitness_clip < 1.0)) {
    throw std::invalid_argument("fitness_clip must lie in (0, 1)");
  }
  if (!(baseline_decay >= 0.0 && baseline_decay < 1.0)) {
    throw std::invalid_argument("baseline_decay must lie in [0, 1)");
  }
  if (!(entropy_weight >= 0.0) || !std::isfinite(entropy_weight)) {
    throw std::invalid_argument("entropy_weight must be finite and >= 0");
  }
}

double ShapedReward(double fitness, double fitness_clip) {
  if (!std::isfinite(fitness) || fitness < 0.0) {
    throw std::invalid_argument("fitness must be finite and non-negative");
  }
  // sin/cos with exact argument reduction: tan(pi/4) comes out as exactly 1.
  const double half = std::min(fitness, fitness_clip) / 2.0;
  return boost::math::sin_pi(half) / boost::math::cos_pi(half);
}

}  // namespace renas
