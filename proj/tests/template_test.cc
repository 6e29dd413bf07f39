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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "maxsive/error.h"
#include "maxsive/fourier.h"
#include "maxsive/random.h"
#include "maxsive/resample.h"
#include "maxsive/stats.h"
#include "maxsive/xtemplate.h"

namespace maxsive {
namespace {

LatentTensor RandomLatent(std::uint64_t seed, std::size_t n = 64, std::size_t c = 4) {
  LatentTensor z(n, n, c);
  Rng rng(seed);
  for (Grid2D& p : z.planes()) rng.FillNormal(p.values());
  return z;
}

LatentTensor Templated(std::uint64_t seed, double eta = 5.0) {
  const TemplateConfig cfg;
  return Inject(RandomLatent(seed), BuildMask(64, 64, cfg), eta);
}

LatentTensor RotateAll(const LatentTensor& z, double degrees) {
  return MapChannels(z, [&](const Grid2D& g) { return Rotate(g, degrees); });
}

double AngleDistance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 180.0);
  return std::min(d, 180.0 - d);
}

// Side fraction of the largest centered axis-aligned square inside the unit
// square rotated by theta, found by bisection on the corner containment test.
double InscribedSideOracle(double theta_deg) {
  const double t = theta_deg * std::numbers::pi / 180.0;
  auto inside = [&](double a) {
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        const double x = sx * a, y = sy * a;
        if (std::abs(x * std::cos(t) + y * std::sin(t)) > 1.0 + 1e-15) return false;
        if (std::abs(-x * std::sin(t) + y * std::cos(t)) > 1.0 + 1e-15) return false;
      }
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

TEST(Mask, DefaultHasSixteenSymmetricPoints) {
  const TemplateConfig cfg;
  const TemplateMask mask = BuildMask(64, 64, cfg);
  ASSERT_EQ(mask.points.size(), 16u);
  std::set<std::pair<std::size_t, std::size_t>> pts(mask.points.begin(), mask.points.end());
  for (const auto& [r, c] : mask.points) {
    EXPECT_TRUE(pts.count({64 - r, 64 - c})) << r << "," << c;
    EXPECT_EQ(mask.grid(r, c), 1.0);
  }
  double total = 0.0;
  for (double v : mask.grid.values()) total += v;
  EXPECT_EQ(total, 16.0);
}

TEST(Mask, PointsFollowTheTwoLines) {
  const TemplateConfig cfg;
  const TemplateMask mask = BuildMask(64, 64, cfg);
  std::set<std::pair<std::size_t, std::size_t>> pts(mask.points.begin(), mask.points.end());
  for (double a : {45.0, 105.0}) {
    const double t = a * std::numbers::pi / 180.0;
    for (double rho : {0.2, 0.3, 0.4, 0.5}) {
      const long dr = std::lround(rho * 32 * std::cos(t)), dc = std::lround(rho * 32 * std::sin(t));
      EXPECT_TRUE(pts.count({32 + dr, 32 + dc}));
      EXPECT_TRUE(pts.count({32 - dr, 32 - dc}));
    }
  }
}

TEST(Mask, DegenerateGeometryIsRejected) {
  try {
    BuildMask(8, 8, TemplateConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGeometryDegeneracy);
  }
  TemplateConfig edge;
  edge.base_angle = 0.0;
  edge.radii = {0.25, 0.5, 0.75, 1.0};
  EXPECT_THROW(BuildMask(64, 64, edge), Error);
  EXPECT_THROW(BuildMask(64, 32, TemplateConfig{}), Error);
}

TEST(Config, ValidateRejectsBadFields) {
  TemplateConfig cfg;
  cfg.theta_d = 0.0;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = {};
  cfg.eta = -1.0;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = {};
  cfg.step = 0.7;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = {};
  cfg.radii = {0.3, 0.2};
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(Inject, ZeroStrengthIsIdentity) {
  const LatentTensor z = RandomLatent(1);
  EXPECT_LT(MaxAbsDiff(Inject(z, BuildMask(64, 64, {}), 0.0), z), 1e-12);
}

TEST(Inject, MaskBinsRiseByEtaTimesSpread) {
  const LatentTensor z = RandomLatent(2, 64, 1);
  const TemplateMask mask = BuildMask(64, 64, {});
  const double eta = 3.0;
  const LatentTensor out = Inject(z, mask, eta);
  const ComplexGrid2D before = CenterShift(Dft2(z.channel(0)));
  const ComplexGrid2D after = CenterShift(Dft2(out.channel(0)));
  std::vector<double> outside;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (mask.grid.values()[i] == 0.0) outside.push_back(std::abs(before.values()[i]));
  }
  const double s = PopulationStd(outside);
  for (std::size_t i = 0; i < before.size(); ++i) {
    const std::complex<double> delta = after.values()[i] - before.values()[i];
    const double expected = mask.grid.values()[i] * eta * s;
    EXPECT_NEAR(delta.real(), expected, 1e-8);
    EXPECT_NEAR(delta.imag(), 0.0, 1e-8);
  }
}

TEST(Inject, ZeroInputStaysZero) {
  const LatentTensor z(64, 64, 2);
  EXPECT_LT(MaxAbsDiff(Inject(z, BuildMask(64, 64, {}), 5.0), z), 1e-12);
}

TEST(Detect, FindsInjectedAngle) {
  const AngleEstimate est = DetectAngle(Templated(3), {});
  EXPECT_LE(AngleDistance(est.theta_hat, 45.0), 0.5);
  EXPECT_EQ(est.profile.size(), 180u);
  EXPECT_FALSE(est.scale_flag);
  EXPECT_NEAR(est.scale_hat, 1.0, 0.02);
  EXPECT_GT(est.normalized_margin, DetectAngle(RandomLatent(3), {}).normalized_margin);
}

TEST(Detect, AngleIsEquivariantUnderRotation) {
  const LatentTensor z = Templated(4);
  for (double theta : {7.0, 20.0, 33.0, 60.0, 90.0, 135.0}) {
    const AngleEstimate est = DetectAngle(RotateAll(z, theta), {});
    EXPECT_LE(AngleDistance(est.theta_hat, 45.0 + theta), 1.0) << theta;
  }
}

TEST(Detect, InvariantToCircularShift) {
  const LatentTensor z = Templated(5);
  const LatentTensor shifted = MapChannels(z, [](const Grid2D& g) { return CircularShift(g, 9, -14); });
  const AngleEstimate a = DetectAngle(z, {}), b = DetectAngle(shifted, {});
  EXPECT_EQ(a.theta_hat, b.theta_hat);
  ASSERT_EQ(a.profile.size(), b.profile.size());
  for (std::size_t k = 0; k < a.profile.size(); ++k) EXPECT_NEAR(a.profile[k], b.profile[k], 1e-9);
}

TEST(Detect, PointModeAlsoFindsAngle) {
  TemplateConfig cfg;
  cfg.line_search = false;
  EXPECT_LE(AngleDistance(DetectAngle(Templated(6), cfg).theta_hat, 45.0), 0.5);
}

TEST(Detect, FlatInputHasNoTemplate) {
  try {
    DetectAngle(LatentTensor(64, 64, 4), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoTemplate);
  }
}

TEST(Detect, UnmarkedNoiseHasSmallMargin) {
  EXPECT_LT(DetectAngle(RandomLatent(7), {}).normalized_margin, 0.5);
}

TEST(Detect, MarginGrowsWithStrength) {
  double previous = -1.0;
  for (double eta : {1.0, 3.0, 5.0, 7.0, 9.0}) {
    const double m = DetectAngle(Templated(8, eta), {}).runner_up_margin;
    EXPECT_GE(m, previous);
    previous = m;
  }
}

TEST(Scale, EstimateFollowsRescale) {
  const LatentTensor z = Templated(9);
  for (double s : {0.8, 1.25}) {
    const std::size_t n = static_cast<std::size_t>(std::lround(64 * s));
    const LatentTensor scaled = MapChannels(z, [&](const Grid2D& g) {
      const Grid2D r = Resize(g, n, n);
      return s < 1.0 ? PadCenter(r, 64, 64) : CropCenter(r, 64, 64);
    });
    const AngleEstimate est = DetectAngle(scaled, {});
    EXPECT_NEAR(est.scale_hat, s, 0.04) << s;
  }
}

TEST(Gamma, MatchesInscribedSquareOracle) {
  for (int deg = 1; deg <= 89; ++deg) {
    EXPECT_NEAR(Gamma(deg), 1.0 / InscribedSideOracle(deg), 1e-9) << deg;
  }
  EXPECT_NEAR(Gamma(0.0), 1.0, 1e-15);
  EXPECT_NEAR(Gamma(45.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(Gamma(100.0), Gamma(10.0), 1e-12);
}

TEST(Correct, SweepAndCandidates) {
  const std::vector<double> sweep = ScaleSweep();
  ASSERT_EQ(sweep.size(), 11u);
  EXPECT_DOUBLE_EQ(sweep.front(), 0.75);
  EXPECT_NEAR(sweep.back(), 1.25, 1e-12);
  const LatentTensor z = Templated(10);
  AngleEstimate est;
  est.theta_hat = 45.0;
  const std::vector<LatentTensor> cands = Correct(z, est, 45.0);
  ASSERT_EQ(cands.size(), 2u);
  EXPECT_LT(MaxAbsDiff(cands[0], z), 1e-12);
  est.scale_flag = true;
  EXPECT_EQ(Correct(z, est, 45.0).size(), 2 * sweep.size());
}

TEST(Correct, UndoesRotationOffLattice) {
  // A smooth field survives two bilinear resamplings almost unchanged.
  LatentTensor z(64, 64, 1);
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) {
      z.at(0, r, c) = std::cos(2 * std::numbers::pi * r / 64.0) + std::sin(2 * std::numbers::pi * c / 64.0);
    }
  }
  AngleEstimate est;
  est.theta_hat = 45.0 + 30.0;
  const std::vector<LatentTensor> cands = Correct(RotateAll(z, 30.0), est, 45.0);
  ASSERT_EQ(cands.size(), 4u);
  // Branch one, rotation only: the central disc is restored.
  double err = 0.0;
  for (std::size_t r = 16; r < 48; ++r) {
    for (std::size_t c = 16; c < 48; ++c) err = std::max(err, std::abs(cands[1].at(0, r, c) - z.at(0, r, c)));
  }
  EXPECT_LT(err, 0.02);
}


TEST(Mask, PointsSitOnTheRoundedRadii) {
  const TemplateConfig cfg;
  const TemplateMask mask = BuildMask(64, 64, cfg);
  const std::vector<long> expected_px = {6, 10, 13, 16};
  for (std::size_t k = 0; k < cfg.radii.size(); ++k) {
    EXPECT_EQ(std::lround(cfg.radii[k] * 32.0), expected_px[k]);
  }
  // Every point is the nearest lattice point to an exact line sample.
  for (const auto& [r, c] : mask.points) {
    double best = 1e9;
    for (double a : {45.0, 105.0}) {
      const double t = a * std::numbers::pi / 180.0;
      for (double rho : cfg.radii) {
        for (double sign : {-1.0, 1.0}) {
          const double dr = r - 32.0 - sign * rho * 32 * std::cos(t);
          const double dc = c - 32.0 - sign * rho * 32 * std::sin(t);
          best = std::min(best, std::hypot(dr, dc));
        }
      }
    }
    EXPECT_LE(best, std::sqrt(0.5) + 1e-12) << r << "," << c;
  }
}

TEST(Mask, AxisAlignedLines) {
  TemplateConfig cfg;
  cfg.base_angle = 0.0;
  cfg.theta_d = 90.0;
  const TemplateMask mask = BuildMask(64, 64, cfg);
  EXPECT_EQ(mask.points.size(), 16u);
  for (const auto& [r, c] : mask.points) EXPECT_TRUE(r == 32 || c == 32) << r << "," << c;
}

TEST(Inject, MagnitudeRisesAtMaskPoints) {
  const TemplateMask mask = BuildMask(64, 64, {});
  for (std::uint64_t seed : {20, 21, 22}) {
    const LatentTensor z = RandomLatent(seed, 64, 1);
    const double eta = 2.0;
    const ComplexGrid2D before = CenterShift(Dft2(z.channel(0)));
    const ComplexGrid2D after = CenterShift(Dft2(Inject(z, mask, eta).channel(0)));
    std::vector<double> outside;
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (mask.grid.values()[i] == 0.0) outside.push_back(std::abs(before.values()[i]));
    }
    const double s = PopulationStd(outside);
    double mean_before = 0.0, mean_after = 0.0;
    for (const auto& [r, c] : mask.points) {
      EXPECT_GE(std::abs(after(r, c)), std::abs(before(r, c)) - eta * s - 1e-9);
      mean_before += std::abs(before(r, c));
      mean_after += std::abs(after(r, c));
    }
    EXPECT_GT(mean_after, mean_before) << seed;
  }
}

TEST(Detect, RandomMarginBelowInjectedMargins) {
  for (std::uint64_t seed : {30, 31, 32, 33, 34}) {
    EXPECT_LT(DetectAngle(RandomLatent(seed), {}).runner_up_margin,
              DetectAngle(Templated(seed + 100, 5.0), {}).runner_up_margin)
        << seed;
  }
}

TEST(Scale, DetectScaleExamples) {
  const TemplateConfig cfg;
  const LatentTensor z = Templated(40);
  EXPECT_FALSE(DetectScale(z, DetectAngle(z, cfg).theta_hat, cfg));
  const LatentTensor up = MapChannels(z, [](const Grid2D& g) { return CropCenter(Resize(g, 80, 80), 64, 64); });
  EXPECT_TRUE(DetectScale(up, DetectAngle(up, cfg).theta_hat, cfg));
  // Nothing to find: every peak-to-ring ratio is zero.
  EXPECT_TRUE(DetectScale(LatentTensor(64, 64, 4), 45.0, cfg));
}

TEST(Gamma, ThirtyDegreeSide) {
  EXPECT_NEAR(1.0 / Gamma(30.0), 0.7320508, 1e-7);
  EXPECT_NEAR(InscribedSideOracle(30.0), 0.7320508, 1e-7);
}

TEST(Correct, LatticeAnglesNeedNoResize) {
  const LatentTensor z = Templated(42);
  AngleEstimate est;
  est.theta_hat = 45.0;
  EXPECT_LT(MaxAbsDiff(Correct(z, est, 45.0).front(), z), 1e-12);
  est.theta_hat = 135.0;
  const std::vector<LatentTensor> cands = Correct(z, est, 45.0);
  const bool found = std::any_of(cands.begin(), cands.end(), [&](const LatentTensor& c) {
    return MaxAbsDiff(c, RotateAll(z, -90.0)) < 1e-12;
  });
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace maxsive
