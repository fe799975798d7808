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

#include "renas/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace renas::stats {

namespace {

void RequireNonEmpty(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("statistic of an empty sample");
}

std::vector<double> Resample(std::span<const double> x, Rng& rng) {
  std::vector<double> out(x.size());
  for (double& v : out) v = x[UniformIndex(rng, x.size())];
  return out;
}

// Linear-interpolated quantile of a sorted sample.
double SortedQuantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Interval PercentileInterval(std::vector<double> stats, double level) {
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  return {SortedQuantile(stats, tail), SortedQuantile(stats, 1.0 - tail)};
}

}  // namespace

double Median(std::span<const double> x) {
  RequireNonEmpty(x);
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double Mean(std::span<const double> x) {
  RequireNonEmpty(x);
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double Variance(std::span<const double> x) {
  const double m = Mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size());
}

Interval BootstrapMedianCi(std::span<const double> x, int resamples,
                           double level, Rng& rng) {
  RequireNonEmpty(x);
  std::vector<double> stats;
  stats.reserve(resamples);
  for (int r = 0; r < resamples; ++r) stats.push_back(Median(Resample(x, rng)));
  return PercentileInterval(std::move(stats), level);
}

Interval BootstrapMedianRatioCi(std::span<const double> num,
                                std::span<const double> den, int resamples,
                                double level, Rng& rng) {
  RequireNonEmpty(num);
  RequireNonEmpty(den);
  std::vector<double> stats;
  stats.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    const double n = Median(Resample(num, rng));
    const double d = Median(Resample(den, rng));
    stats.push_back(n / d);
  }
  return PercentileInterval(std::move(stats), level);
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

RankSumResult MannWhitney(std::span<const double> a, std::span<const double> b) {
  RequireNonEmpty(a);
  RequireNonEmpty(b);
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
  std::vector<std::pair<double, int>> all;
  all.reserve(n);
  for (double v : a) all.emplace_back(v, 0);
  for (double v : b) all.emplace_back(v, 1);
  std::sort(all.begin(), all.end());

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && all[j].first == all[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 0) rank_sum_a += avg_rank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);
  RankSumResult r;
  r.u = rank_sum_a - dn1 * (dn1 + 1.0) / 2.0;
  const double mean_u = dn1 * dn2 / 2.0;
  const double var_u =
      dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (var_u <= 0.0) {
    r.z = 0.0;
    r.p_less = 1.0;
    return r;
  }
  // Continuity correction toward the null.
  r.z = (r.u - mean_u + 0.5) / std::sqrt(var_u);
  r.p_less = NormalCdf(r.z);
  return r;
}

}  // namespace renas::stats
