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

#ifndef MAXSIVE_THRESHOLD_H_
#define MAXSIVE_THRESHOLD_H_

#include <cstddef>
#include <cstdint>

namespace maxsive {

enum class CalibrationMethod { kAnalytic, kMonteCarlo };

// Threshold tau with P(r > tau) = fpr under the null, where r is the Pearson
// correlation between a fixed vector and L i.i.d. normals. Uses the exact
// null: r * sqrt((L-2)/(1-r^2)) ~ Student t with L-2 degrees of freedom, so
// tau = t / sqrt(L - 2 + t^2) with t the (1 - fpr) quantile.
double AnalyticThreshold(std::size_t length, double fpr);

// Empirical (1 - fpr) quantile of `trials` null scores. Requires
// trials * fpr >= 100, otherwise throws kCalibrationPrecision.
double MonteCarloThreshold(std::size_t length, double fpr, std::size_t trials,
                           std::uint64_t seed);

double CalibrateThreshold(std::size_t length, double fpr, CalibrationMethod method,
                          std::size_t trials = 0, std::uint64_t seed = 0);

// Detection is one-sided and strict.
inline bool Verify(double score, double tau) { return score > tau; }

// Equal-tailed 95% acceptance interval [lo, hi] for the number of successes
// of Binomial(n, p).
struct CountInterval {
  std::size_t lo = 0;
  std::size_t hi = 0;
};
CountInterval BinomialInterval95(std::size_t n, double p);

}  // namespace maxsive

#endif  // MAXSIVE_THRESHOLD_H_
