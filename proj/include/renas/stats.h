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

// Small statistics toolkit for comparing strategies across seeds.

#ifndef RENAS_STATS_H_
#define RENAS_STATS_H_

#include <span>
#include <vector>

#include "renas/rng.h"

namespace renas::stats {

// Throws std::invalid_argument on empty input.
double Median(std::span<const double> x);
double Mean(std::span<const double> x);
// Population variance (divides by n).
double Variance(std::span<const double> x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Percentile bootstrap interval for the median.
Interval BootstrapMedianCi(std::span<const double> x, int resamples,
                           double level, Rng& rng);
// Percentile bootstrap interval for median(num) / median(den), resampling
// both groups independently.
Interval BootstrapMedianRatioCi(std::span<const double> num,
                                std::span<const double> den, int resamples,
                                double level, Rng& rng);

struct RankSumResult {
  double u = 0.0;        // Mann-Whitney U of the first sample
  double z = 0.0;        // continuity-corrected, tie-corrected
  double p_less = 1.0;   // one-sided: first sample tends to be smaller
};

// Normal approximation with average ranks for ties.
RankSumResult MannWhitney(std::span<const double> a, std::span<const double> b);

double NormalCdf(double z);

}  // namespace renas::stats

#endif  // RENAS_STATS_H_
