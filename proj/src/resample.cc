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

#include "maxsive/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "maxsive/error.h"

namespace maxsive {
namespace {

// Integer lookups within this distance of a lattice point snap to it, so that
// 90 degree rotations and identity warps are exact despite sin/cos roundoff.
constexpr double kSnap = 1e-9;

double SnapToLattice(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < kSnap ? r : x;
}

double SampleNearest(const Grid2D& g, double row, double col) {
  const double rr = std::floor(row + 0.5);
  const double cc = std::floor(col + 0.5);
  if (rr < 0 || cc < 0 || rr >= static_cast<double>(g.height()) ||
      cc >= static_cast<double>(g.width())) {
    return 0.0;
  }
  return g(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
}

double Sample(const Grid2D& g, double row, double col, Interp interp) {
  row = SnapToLattice(row);
  col = SnapToLattice(col);
  return interp == Interp::kNearest ? SampleNearest(g, row, col)
                                    : SampleBilinear(g, row, col);
}

}  // namespace

double SampleBilinear(const Grid2D& g, double row, double col) {
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  const double fr = row - r0f;
  const double fc = col - c0f;
  const long r0 = static_cast<long>(r0f);
  const long c0 = static_cast<long>(c0f);
  const long h = static_cast<long>(g.height());
  const long w = static_cast<long>(g.width());
  auto at = [&](long r, long c) -> double {
    if (r < 0 || c < 0 || r >= h || c >= w) return 0.0;
    return g(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  double v = 0.0;
  if (fr == 0.0 && fc == 0.0) return at(r0, c0);
  v += (1 - fr) * (1 - fc) * at(r0, c0);
  v += (1 - fr) * fc * at(r0, c0 + 1);
  v += fr * (1 - fc) * at(r0 + 1, c0);
  v += fr * fc * at(r0 + 1, c0 + 1);
  return v;
}

Grid2D WarpLinear(const Grid2D& g, const std::array<double, 4>& m,
                  Interp interp) {
  RequireFinite(g.values(), "warp input");
  const double det = m[0] * m[3] - m[1] * m[2];
  if (!std::isfinite(det) || std::abs(det) < 1e-12) {
    throw Error(ErrorCode::kInvalidInput, "warp matrix is singular");
  }
  const double i11 = m[3] / det;
  const double i12 = -m[1] / det;
  const double i21 = -m[2] / det;
  const double i22 = m[0] / det;
  const double cr = (static_cast<double>(g.height()) - 1.0) / 2.0;
  const double cc = (static_cast<double>(g.width()) - 1.0) / 2.0;
  Grid2D out(g.height(), g.width());
  for (std::size_t r = 0; r < g.height(); ++r) {
    const double dr = static_cast<double>(r) - cr;
    for (std::size_t c = 0; c < g.width(); ++c) {
      const double dc = static_cast<double>(c) - cc;
      out(r, c) = Sample(g, cr + i11 * dr + i12 * dc, cc + i21 * dr + i22 * dc,
                         interp);
    }
  }
  return out;
}

Grid2D Rotate(const Grid2D& g, double degrees, Interp interp) {
  if (!std::isfinite(degrees)) {
    throw Error(ErrorCode::kInvalidInput, "rotation angle is not finite");
  }
  const double t = degrees * std::numbers::pi / 180.0;
  double cs = std::cos(t);
  double sn = std::sin(t);
  // Exact values at multiples of 90 degrees keep those rotations permutations.
  if (std::abs(cs) < 1e-15) cs = 0.0;
  if (std::abs(sn) < 1e-15) sn = 0.0;
  return WarpLinear(g, {cs, -sn, sn, cs}, interp);
}

Grid2D Resize(const Grid2D& g, std::size_t new_height, std::size_t new_width,
              Interp interp) {
  if (new_height == 0 || new_width == 0) {
    throw Error(ErrorCode::kShape, "resize target must be positive");
  }
  RequireFinite(g.values(), "resize input");
  if (new_height == g.height() && new_width == g.width()) return g;
  const double sy = static_cast<double>(g.height()) / new_height;
  const double sx = static_cast<double>(g.width()) / new_width;
  const double max_r = static_cast<double>(g.height()) - 1.0;
  const double max_c = static_cast<double>(g.width()) - 1.0;
  Grid2D out(new_height, new_width);
  for (std::size_t r = 0; r < new_height; ++r) {
    const double src_r = std::clamp((r + 0.5) * sy - 0.5, 0.0, max_r);
    for (std::size_t c = 0; c < new_width; ++c) {
      const double src_c = std::clamp((c + 0.5) * sx - 0.5, 0.0, max_c);
      out(r, c) = Sample(g, src_r, src_c, interp);
    }
  }
  return out;
}

Grid2D PadCenter(const Grid2D& g, std::size_t height, std::size_t width) {
  if (height < g.height() || width < g.width()) {
    throw Error(ErrorCode::kShape, "pad target smaller than source");
  }
  const std::size_t off_r = (height - g.height()) / 2;
  const std::size_t off_c = (width - g.width()) / 2;
  Grid2D out(height, width);
  for (std::size_t r = 0; r < g.height(); ++r) {
    for (std::size_t c = 0; c < g.width(); ++c) {
      out(r + off_r, c + off_c) = g(r, c);
    }
  }
  return out;
}

Grid2D CropAt(const Grid2D& g, std::size_t row, std::size_t col,
              std::size_t height, std::size_t width) {
  if (height == 0 || width == 0 || row + height > g.height() ||
      col + width > g.width()) {
    throw Error(ErrorCode::kShape,
                "crop " + std::to_string(height) + "x" + std::to_string(width) +
                    " does not fit source " + std::to_string(g.height()) + "x" +
                    std::to_string(g.width()));
  }
  Grid2D out(height, width);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) out(r, c) = g(r + row, c + col);
  }
  return out;
}

Grid2D CropCenter(const Grid2D& g, std::size_t height, std::size_t width) {
  if (height > g.height() || width > g.width()) {
    throw Error(ErrorCode::kShape, "crop target larger than source");
  }
  return CropAt(g, (g.height() - height) / 2, (g.width() - width) / 2, height,
                width);
}

Grid2D CircularShift(const Grid2D& g, long dr, long dc) {
  const long h = static_cast<long>(g.height());
  const long w = static_cast<long>(g.width());
  Grid2D out(g.height(), g.width());
  for (long r = 0; r < h; ++r) {
    const long sr = ((r - dr) % h + h) % h;
    for (long c = 0; c < w; ++c) {
      const long sc = ((c - dc) % w + w) % w;
      out(r, c) = g(sr, sc);
    }
  }
  return out;
}

}  // namespace maxsive
