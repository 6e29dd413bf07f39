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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "maxsive/capacity.h"
#include "maxsive/error.h"

namespace maxsive {
namespace {

TEST(Capacity, EntropyPerElement) {
  EXPECT_DOUBLE_EQ(Entropy(PayloadDistribution::kBernoulliHalf), 1.0);
  const double oracle = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
  EXPECT_NEAR(Entropy(PayloadDistribution::kStandardNormal), oracle, 1e-15);
  EXPECT_DOUBLE_EQ(TabulatedEntropy(PayloadDistribution::kStandardNormal), 2.0471);
}

TEST(Capacity, ReproducesPublishedTable) {
  struct Row {
    std::size_t length;
    PayloadDistribution dist;
    double bits;
  };
  const Row rows[] = {{48, PayloadDistribution::kBernoulliHalf, 48.0},
                      {48, PayloadDistribution::kBernoulliHalf, 48.0},
                      {10, PayloadDistribution::kStandardNormal, 20.471},
                      {11, PayloadDistribution::kBernoulliHalf, 11.0},
                      {256, PayloadDistribution::kBernoulliHalf, 256.0},
                      {4096, PayloadDistribution::kStandardNormal, 8384.9216}};
  for (const Row& r : rows) EXPECT_NEAR(CapacityBits(r.length, r.dist), r.bits, 5e-5) << r.length;
}

TEST(Capacity, ExactEntropyDiffersFromTabulated) {
  const double exact = CapacityBits(4096, PayloadDistribution::kStandardNormal, true);
  EXPECT_NEAR(exact, std::round(4096 * Entropy(PayloadDistribution::kStandardNormal) * 1e4) / 1e4,
              1e-9);
  EXPECT_NE(exact, 8384.9216);
}

TEST(Capacity, ParseNames) {
  EXPECT_EQ(ParseDistribution("ber"), PayloadDistribution::kBernoulliHalf);
  EXPECT_EQ(ParseDistribution("bernoulli"), PayloadDistribution::kBernoulliHalf);
  EXPECT_EQ(ParseDistribution("normal"), PayloadDistribution::kStandardNormal);
  EXPECT_EQ(ParseDistribution("gaussian"), PayloadDistribution::kStandardNormal);
  EXPECT_EQ(ParseDistribution(DistributionName(PayloadDistribution::kStandardNormal)),
            PayloadDistribution::kStandardNormal);
  EXPECT_THROW(ParseDistribution("uniform"), Error);
}

}  // namespace
}  // namespace maxsive
