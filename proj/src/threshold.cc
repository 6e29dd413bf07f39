// Copyright 2026 The maxsive Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maxsive/threshold.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "maxsive/error.h"
#include "maxsive/parallel.h"
#include "maxsive/random.h"
#include "maxsive/stats.h"

namespace maxsive {
namespace {

void CheckArgs(std::size_t length, double fpr) {
  if (length < 16) throw Error(ErrorCode::kConfig, "calibration needs L >= 16");
  if (!(fpr > 0.0 && fpr < 0.5)) {
    throw Error(ErrorCode::kConfig, "target fpr must lie in (0, 0.5)");
  }
}

}  // namespace

double AnalyticThreshold(std::size_t length, double fpr) {
  if (length < 16) throw Error(ErrorCode::kConfig, "calibration needs L >= 16");
  if (!(fpr > 0.0 && fpr <= 0.5)) throw Error(ErrorCode::kConfig, "fpr must lie in (0, 0.5]");
  const double dof = static_cast<double>(length - 2);
  const boost::math::students_t dist(dof);
  const double t = boost::math::quantile(boost::math::complement(dist, fpr));
  return t / std::sqrt(dof + t * t);
}

double MonteCarloThreshold(std::size_t length, double fpr, std::size_t trials,
                           std::uint64_t seed) {
  CheckArgs(length, fpr);
  if (static_cast<double>(trials) * fpr < 100.0) {
    throw Error(ErrorCode::kCalibrationPrecision,
                std::to_string(trials) + " trials give fewer than 100 expected "
                "exceedances at fpr " + std::to_string(fpr));
  }
  const Seed256 root = Seed256::FromU64(seed);
  std::vector<double> reference(length);
  Rng(DeriveSeed(root, "calibration-reference", 0)).FillNormal(reference);
  reference = NormalizeUnit(reference);

  std::vector<double> scores(trials);
  ParallelFor(trials, [&](std::size_t i) {
    Rng rng(DeriveSeed(root, "calibration-null", i));
    std::vector<double> v(length);
    rng.FillNormal(v);
    scores[i] = Pearson(reference, v);
  });
  // At index k, exactly trials - 1 - k scores sit strictly above (ties aside).
  const double target = std::ceil((1.0 - fpr) * static_cast<double>(trials));
  const std::size_t k = std::min(trials - 1, static_cast<std::size_t>(std::max(1.0, target)) - 1);
  std::nth_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(k),
                   scores.end());
  return scores[k];
}

double CalibrateThreshold(std::size_t length, double fpr, CalibrationMethod method,
                          std::size_t trials, std::uint64_t seed) {
  if (method == CalibrationMethod::kAnalytic) return AnalyticThreshold(length, fpr);
  return MonteCarloThreshold(length, fpr, trials, seed);
}

CountInterval BinomialInterval95(std::size_t n, double p) {
  if (n == 0 || !(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "binomial interval needs n >= 1 and p in (0, 1)");
  }
  using Policy = boost::math::policies::policy<
      boost::math::policies::discrete_quantile<boost::math::policies::integer_round_outwards>>;
  const boost::math::binomial_distribution<double, Policy> dist(static_cast<double>(n), p);
  double lo = boost::math::quantile(dist, 0.025);
  double hi = boost::math::quantile(boost::math::complement(dist, 0.025));
  // Outward rounding can leave a tail with less than 2.5% outside; tighten
  // to the largest lo with P(X < lo) <= 2.5% and the smallest such hi.
  while (lo < hi && boost::math::cdf(dist, lo) <= 0.025) lo += 1.0;
  while (hi > lo && boost::math::cdf(boost::math::complement(dist, hi - 1.0)) <= 0.025) hi -= 1.0;
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

}  // namespace maxsive
