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

#include "maxsive/capacity.h"

#include <cmath>
#include <numbers>

#include "maxsive/error.h"

namespace maxsive {
namespace {

double Round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

PayloadDistribution ParseDistribution(const std::string& text) {
  if (text == "ber" || text == "bernoulli") return PayloadDistribution::kBernoulliHalf;
  if (text == "normal" || text == "gaussian") return PayloadDistribution::kStandardNormal;
  throw Error(ErrorCode::kInvalidInput, "unknown distribution '" + text + "' (ber|normal)");
}

std::string DistributionName(PayloadDistribution dist) {
  return dist == PayloadDistribution::kBernoulliHalf ? "ber" : "normal";
}

double Entropy(PayloadDistribution dist) {
  if (dist == PayloadDistribution::kBernoulliHalf) return 1.0;
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
}

double TabulatedEntropy(PayloadDistribution dist) { return Round4(Entropy(dist)); }

double CapacityBits(std::size_t length, PayloadDistribution dist, bool exact) {
  if (length == 0) throw Error(ErrorCode::kInvalidInput, "L must be >= 1");
  const double per = exact ? Entropy(dist) : TabulatedEntropy(dist);
  return Round4(static_cast<double>(length) * per);
}

}  // namespace maxsive
