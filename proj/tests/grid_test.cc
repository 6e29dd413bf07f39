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
#include <complex>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "maxsive/error.h"
#include "maxsive/fourier.h"
#include "maxsive/grid.h"
#include "maxsive/latent_io.h"
#include "maxsive/random.h"
#include "maxsive/resample.h"
#include "maxsive/stats.h"

namespace maxsive {
namespace {

Grid2D RandomGrid(std::size_t h, std::size_t w, std::uint64_t seed) {
  Grid2D g(h, w);
  Rng rng(seed);
  rng.FillNormal(g.values());
  return g;
}

// Direct O(N^2) evaluation of the forward DFT.
ComplexGrid2D BruteDft(const Grid2D& g) {
  const std::size_t h = g.height(), w = g.width();
  ComplexGrid2D out(h, w);
  for (std::size_t k1 = 0; k1 < h; ++k1) {
    for (std::size_t k2 = 0; k2 < w; ++k2) {
      std::complex<double> acc = 0.0;
      for (std::size_t p1 = 0; p1 < h; ++p1) {
        for (std::size_t p2 = 0; p2 < w; ++p2) {
          const double phase = -2.0 * std::numbers::pi *
                               (static_cast<double>(k1 * p1) / h + static_cast<double>(k2 * p2) / w);
          acc += g(p1, p2) * std::polar(1.0, phase);
        }
      }
      out(k1, k2) = acc;
    }
  }
  return out;
}

TEST(Grid, FlattenIsChannelMajor) {
  LatentTensor z(2, 3, 2);
  z.at(1, 0, 2) = 7.0;
  const std::vector<double> flat = z.Flatten();
  EXPECT_EQ(flat[1 * 6 + 0 * 3 + 2], 7.0);
  EXPECT_EQ(LatentTensor::FromFlat(2, 3, 2, flat), z);
}

TEST(Grid, ArithmeticAndMaxAbsDiff) {
  LatentTensor a(2, 2, 1, 1.0), b(2, 2, 1, 2.0);
  const LatentTensor c = a + 3.0 * b;
  EXPECT_DOUBLE_EQ(c.at(0, 1, 1), 7.0);
  EXPECT_DOUBLE_EQ(MaxAbsDiff(c, a), 6.0);
  EXPECT_THROW(MaxAbsDiff(a, LatentTensor(2, 3, 1)), Error);
}

TEST(Grid, RequireFiniteRejectsNan) {
  std::vector<double> v = {1.0, std::nan("")};
  EXPECT_THROW(RequireFinite(v, "v"), Error);
}

TEST(Fourier, MatchesBruteForceDft) {
  const Grid2D g = RandomGrid(6, 8, 1);
  const ComplexGrid2D fast = Dft2(g);
  const ComplexGrid2D slow = BruteDft(g);
  for (std::size_t i = 0; i < fast.size(); ++i) {
    EXPECT_NEAR(std::abs(fast.values()[i] - slow.values()[i]), 0.0, 1e-10);
  }
}

TEST(Fourier, Parseval) {
  const Grid2D g = RandomGrid(16, 12, 2);
  double spatial = 0.0, spectral = 0.0;
  for (double v : g.values()) spatial += v * v;
  const ComplexGrid2D spectrum = Dft2(g);
  for (const auto& v : spectrum.values()) spectral += std::norm(v);
  EXPECT_NEAR(spatial, spectral / g.size(), 1e-9 * spatial);
}

TEST(Fourier, RoundTrip) {
  const Grid2D g = RandomGrid(8, 8, 3);
  EXPECT_LT(MaxAbsDiff(Idft2(Dft2(g)), g), 1e-12);
  ComplexGrid2D c(4, 4);
  c(1, 2) = {1.0, -2.0};
  const ComplexGrid2D back = Idft2Complex(Dft2Complex(c));
  EXPECT_NEAR(std::abs(back(1, 2) - c(1, 2)), 0.0, 1e-12);
}

TEST(Fourier, AsymmetricSpectrumIsRejected) {
  ComplexGrid2D c(4, 4);
  c(1, 1) = 1.0;
  try {
    Idft2(c);
    FAIL() << "expected a symmetry violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSymmetryViolation);
  }
}

TEST(Fourier, CenterShiftMovesDc) {
  Grid2D g(4, 6, 1.0);
  const Grid2D mag = CenteredMagnitude(g);
  EXPECT_NEAR(mag(2, 3), 24.0, 1e-12);
  EXPECT_NEAR(mag(0, 0), 0.0, 1e-12);
  const ComplexGrid2D spec = Dft2(RandomGrid(4, 6, 4));
  EXPECT_EQ(UncenterShift(CenterShift(spec)), spec);
}

TEST(Stats, PearsonExample) {
  const std::vector<double> a = {1, 2, 3}, b = {1, 2, 4};
  // Oracle: cov = 1.5, var_a = 1, var_b = 7/3 (sample forms).
  const double oracle = 1.5 / std::sqrt(1.0 * 7.0 / 3.0);
  EXPECT_NEAR(Pearson(a, b), oracle, 1e-12);
  EXPECT_NEAR(Pearson(a, b), 0.98198, 5e-6);
}

TEST(Stats, PearsonDegenerateAndLength) {
  const std::vector<double> flat = {1, 1, 1}, a = {1, 2, 3}, short_v = {1, 2};
  try {
    Pearson(flat, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
  EXPECT_THROW(Pearson(short_v, short_v), Error);
}

TEST(Stats, PopulationStdAndNormalize) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Mean(v), 2.5);
  EXPECT_NEAR(PopulationStd(v), std::sqrt(1.25), 1e-15);
  const std::vector<double> n = NormalizeUnit(v);
  EXPECT_NEAR(Mean(n), 0.0, 1e-15);
  EXPECT_NEAR(PopulationStd(n), 1.0, 1e-15);
}

TEST(Random, Sha256KnownVector) {
  const std::string abc = "abc";
  const Digest256 d = Sha256({reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()});
  Seed256 s;
  s.bytes = d;
  EXPECT_EQ(s.ToHex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Random, HexRoundTripAndValidation) {
  const Seed256 s = Seed256::FromU64(42);
  EXPECT_EQ(Seed256::FromHex(s.ToHex()), s);
  EXPECT_THROW(Seed256::FromHex("abc"), Error);
  EXPECT_THROW(Seed256::FromHex(std::string(64, 'g')), Error);
}

TEST(Random, DerivedStreamsDiffer) {
  const Seed256 s = Seed256::FromU64(1);
  EXPECT_NE(DeriveSeed(s, "a", 0), DeriveSeed(s, "b", 0));
  EXPECT_NE(DeriveSeed(s, "a", 0), DeriveSeed(s, "a", 1));
  EXPECT_EQ(DeriveSeed(s, "a", 3), DeriveSeed(s, "a", 3));
}

TEST(Random, RngIsDeterministicAndBounded) {
  Rng a(Seed256::FromU64(9)), b(Seed256::FromU64(9));
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
  Rng r(5);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_LT(r.Below(7), 7u);
    const double u = r.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Random, NormalMoments) {
  Rng r(11);
  std::vector<double> v(200000);
  r.FillNormal(v);
  EXPECT_NEAR(Mean(v), 0.0, 0.01);
  EXPECT_NEAR(PopulationStd(v), 1.0, 0.01);
}

TEST(Random, FisherYatesIsPermutation) {
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  Rng r(3);
  FisherYatesShuffle(std::span<int>(v), r);
  std::set<int> seen(v.begin(), v.end());
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_NE(v[0] + v[1] * 100, 0 + 1 * 100);
}

TEST(Resample, Rotate90IsExactPermutation) {
  const Grid2D g = RandomGrid(8, 8, 5);
  const Grid2D r = Rotate(g, 90.0);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(r(i, j), g(j, 7 - i), 1e-12);
  }
  Grid2D back = g;
  for (int k = 0; k < 4; ++k) back = Rotate(back, 90.0);
  EXPECT_LT(MaxAbsDiff(back, g), 1e-12);
}

TEST(Resample, RotateZeroAndIdentityWarp) {
  const Grid2D g = RandomGrid(7, 9, 6);
  EXPECT_LT(MaxAbsDiff(Rotate(g, 0.0), g), 1e-12);
  EXPECT_LT(MaxAbsDiff(WarpLinear(g, {1, 0, 0, 1}), g), 1e-12);
  EXPECT_LT(MaxAbsDiff(Resize(g, 7, 9), g), 1e-12);
}

TEST(Resample, PadCropAndShift) {
  const Grid2D g = RandomGrid(5, 6, 7);
  const Grid2D padded = PadCenter(g, 9, 9);
  EXPECT_EQ(padded.height(), 9u);
  EXPECT_EQ(CropCenter(padded, 5, 6), g);
  const Grid2D shifted = CircularShift(g, 2, -1);
  EXPECT_EQ(shifted(2, 0), g(0, 1));
  EXPECT_EQ(CircularShift(shifted, -2, 1), g);
  EXPECT_EQ(CropAt(g, 1, 2, 2, 2)(1, 1), g(2, 3));
}

TEST(Resample, BilinearSampling) {
  Grid2D g(2, 2);
  g(0, 0) = 0;
  g(0, 1) = 1;
  g(1, 0) = 2;
  g(1, 1) = 3;
  EXPECT_DOUBLE_EQ(SampleBilinear(g, 0.5, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(SampleBilinear(g, 1.0, 0.0), 2.0);
  EXPECT_DOUBLE_EQ(SampleBilinear(g, -3.0, 0.0), 0.0);
}

TEST(LatentIo, RoundTripAtFloatPrecision) {
  LatentTensor z(3, 5, 2);
  Rng r(8);
  for (Grid2D& p : z.planes()) r.FillNormal(p.values());
  const std::vector<std::uint8_t> bytes = EncodeMxlt(z);
  ASSERT_EQ(bytes.size(), kMxltHeaderSize + 4 * z.size());
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "MXLT");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 3);
  EXPECT_EQ(bytes[7], 5);
  EXPECT_EQ(bytes[9], 2);
  const LatentTensor back = DecodeMxlt(bytes);
  ASSERT_TRUE(back.SameShape(z));
  EXPECT_LT(MaxAbsDiff(back, z), 1e-6);
}

TEST(LatentIo, RejectsCorruptFiles) {
  std::vector<std::uint8_t> bytes = EncodeMxlt(LatentTensor(2, 2, 1));
  bytes.pop_back();
  EXPECT_THROW(DecodeMxlt(bytes), Error);
  bytes = EncodeMxlt(LatentTensor(2, 2, 1));
  bytes[0] = 'X';
  EXPECT_THROW(DecodeMxlt(bytes), Error);
}


TEST(Fourier, ConstantGridHasOnlyDc) {
  const Grid2D g(16, 16, 2.5);
  const ComplexGrid2D spec = Dft2(g);
  const double dc = 2.5 * 256.0;
  EXPECT_NEAR(std::abs(spec(0, 0) - dc), 0.0, 1e-9 * dc);
  for (std::size_t i = 1; i < spec.size(); ++i) EXPECT_LT(std::abs(spec.values()[i]), 1e-9 * dc);
}

TEST(Fourier, RoundTripOnLargeGrids) {
  for (std::size_t n : {64, 128}) {
    const Grid2D g = RandomGrid(n, n, 20 + n);
    EXPECT_LT(MaxAbsDiff(Idft2(Dft2(g)), g), 1e-9) << n;
  }
}

TEST(Fourier, ParsevalAgainstBruteForceSum) {
  const Grid2D g = RandomGrid(32, 32, 21);
  double spatial = 0.0, spectral = 0.0;
  for (double v : g.values()) spatial += v * v;
  const ComplexGrid2D slow = BruteDft(g);
  for (const auto& v : slow.values()) spectral += std::norm(v);
  EXPECT_NEAR(spatial, spectral / g.size(), 1e-9 * spatial);
  const ComplexGrid2D fast = Dft2(g);
  double fast_spectral = 0.0;
  for (const auto& v : fast.values()) fast_spectral += std::norm(v);
  EXPECT_NEAR(fast_spectral, spectral, 1e-9 * spectral);
}

TEST(Fourier, SingleDcBinInvertsToOnes) {
  ComplexGrid2D c(8, 8);
  c(0, 0) = 64.0;
  const Grid2D g = Idft2(c);
  for (double v : g.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Fourier, ForwardAfterInverseOnSymmetricSpectrum) {
  const ComplexGrid2D spec = Dft2(RandomGrid(16, 16, 22));
  const ComplexGrid2D again = Dft2(Idft2(spec));
  for (std::size_t i = 0; i < spec.size(); ++i) {
    EXPECT_LT(std::abs(again.values()[i] - spec.values()[i]), 1e-9);
  }
}

TEST(Fourier, CenterShiftIsAnInvolutionOnEvenGrids) {
  const ComplexGrid2D spec = Dft2(RandomGrid(8, 10, 23));
  EXPECT_EQ(CenterShift(CenterShift(spec)), spec);
  const ComplexGrid2D shifted = CenterShift(spec);
  std::vector<double> a, b;
  for (const auto& v : spec.values()) a.push_back(std::abs(v));
  for (const auto& v : shifted.values()) b.push_back(std::abs(v));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(Resample, NearestRotationsOnTheLattice) {
  const Grid2D g = RandomGrid(64, 64, 24);
  EXPECT_EQ(Rotate(Rotate(g, 90.0, Interp::kNearest), -90.0, Interp::kNearest), g);
  EXPECT_LT(MaxAbsDiff(Rotate(g, 360.0, Interp::kNearest), g), 1e-6);
}

TEST(Resample, ResizeKeepsConstants) {
  const Grid2D g(64, 64, 3.0);
  const Grid2D back = Resize(Resize(g, 32, 32), 64, 64);
  EXPECT_LT(MaxAbsDiff(back, g), 1e-12);
}

TEST(Stats, PearsonSignsAndNormalizeExample) {
  const std::vector<double> v = {0.3, -1.2, 2.5, 0.1}, neg = {-0.3, 1.2, -2.5, -0.1};
  EXPECT_NEAR(Pearson(v, v), 1.0, 1e-15);
  EXPECT_NEAR(Pearson(v, neg), -1.0, 1e-15);
  const std::vector<double> n = NormalizeUnit(std::vector<double>{1, 2, 3});
  EXPECT_NEAR(n[0], -std::sqrt(1.5), 1e-12);
  EXPECT_NEAR(n[1], 0.0, 1e-12);
  EXPECT_NEAR(n[2], std::sqrt(1.5), 1e-12);
  const std::vector<double> twice = NormalizeUnit(n);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(twice[i], n[i], 1e-9);
  EXPECT_THROW(NormalizeUnit(std::vector<double>{4, 4, 4}), Error);
}

}  // namespace
}  // namespace maxsive
