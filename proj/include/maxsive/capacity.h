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

#ifndef MAXSIVE_CAPACITY_H_
#define MAXSIVE_CAPACITY_H_

#include <cstddef>
#include <string>

namespace maxsive {

enum class PayloadDistribution { kBernoulliHalf, kStandardNormal };

// "ber" / "bernoulli" and "normal" / "gaussian"; throws kInvalidInput.
PayloadDistribution ParseDistribution(const std::string& text);
std::string DistributionName(PayloadDistribution dist);

// Shannon entropy per element in bits: 1 for a fair coin, 0.5*log2(2*pi*e)
// for a standard normal.
double Entropy(PayloadDistribution dist);

// Per-element entropy as tabulated, i.e. rounded to 4 decimals
// (2.0471 bits for the standard normal).
double TabulatedEntropy(PayloadDistribution dist);

// L * TabulatedEntropy(dist) (or L * Entropy(dist) when exact is set),
// rounded to 4 decimals.
double CapacityBits(std::size_t length, PayloadDistribution dist, bool exact = false);

}  // namespace maxsive

#endif  // MAXSIVE_CAPACITY_H_
