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

#include "maxsive/stats.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxsive/error.h"
#include "maxsive/grid.h"

namespace maxsive {
namespace {

// Spread below this fraction of the largest magnitude is roundoff, not signal.
constexpr double kRelativeVarianceFloor = 1e-13;

double MaxAbs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double Mean(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kInvalidInput, "mean of empty vector");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double PopulationStd(std::span<const double> v) {
  const double m = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

double Pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "pearson length mismatch " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  if (a.size() < 3) {
    throw Error(ErrorCode::kInvalidInput, "pearson needs at least 3 samples");
  }
  RequireFinite(a, "pearson input");
  RequireFinite(b, "pearson input");
  const double ma = Mean(a);
  const double mb = Mean(b);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  const double n = static_cast<double>(a.size());
  const double floor_a = kRelativeVarianceFloor * MaxAbs(a);
  const double floor_b = kRelativeVarianceFloor * MaxAbs(b);
  if (saa <= n * floor_a * floor_a || sbb <= n * floor_b * floor_b ||
      saa <= 0.0 || sbb <= 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "pearson input has zero variance");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> NormalizeUnit(std::span<const double> v) {
  if (v.size() < 2) {
    throw Error(ErrorCode::kInvalidInput, "normalize needs at least 2 values");
  }
  RequireFinite(v, "normalize input");
  const double m = Mean(v);
  const double sd = PopulationStd(v);
  if (!(sd > kRelativeVarianceFloor * MaxAbs(v))) {
    throw Error(ErrorCode::kDegenerateInput, "normalize input has zero variance");
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - m) / sd;
  return out;
}

}  // namespace maxsive
