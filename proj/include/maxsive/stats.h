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

#ifndef MAXSIVE_STATS_H_
#define MAXSIVE_STATS_H_

#include <span>
#include <vector>

namespace maxsive {

double Mean(std::span<const double> v);

// Standard deviation with divisor n. This convention is used everywhere in the
// library, including watermark normalization and template injection.
double PopulationStd(std::span<const double> v);

// Pearson correlation coefficient. Requires equal lengths >= 3 and nonzero
// variance on both sides; throws kDegenerateInput on zero variance and
// kInvalidInput on length problems.
double Pearson(std::span<const double> a, std::span<const double> b);

// (v - mean) / population std. Requires length >= 2 and nonzero variance.
std::vector<double> NormalizeUnit(std::span<const double> v);

}  // namespace maxsive

#endif  // MAXSIVE_STATS_H_
