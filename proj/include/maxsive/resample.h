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

#ifndef MAXSIVE_RESAMPLE_H_
#define MAXSIVE_RESAMPLE_H_

#include <array>
#include <cstddef>

#include "maxsive/grid.h"

namespace maxsive {

enum class Interp { kNearest, kBilinear };

// Pixel (r, c) is taken to cover [r, r+1) x [c, c+1), so the geometric center
// of an h x w grid sits between pixels at index ((h-1)/2, (w-1)/2). All
// geometric resamplers use that center; a 90 degree rotation is then an
// exact lattice permutation.

// Counterclockwise rotation (from the row axis toward the column axis) by
// `degrees` about the grid center. Cells whose source falls outside the input
// are set to zero.
Grid2D Rotate(const Grid2D& g, double degrees, Interp interp = Interp::kBilinear);

// Maps output cell q to input c + A^{-1} (q - c) where A = `matrix` given in
// (row, col) coordinates as {a11, a12, a21, a22}. Out-of-support cells are 0.
Grid2D WarpLinear(const Grid2D& g, const std::array<double, 4>& matrix,
                  Interp interp = Interp::kBilinear);

// Resampling with pixel-center alignment (src = (dst + 0.5) * in/out - 0.5);
// edges clamp.
Grid2D Resize(const Grid2D& g, std::size_t new_height, std::size_t new_width,
              Interp interp = Interp::kBilinear);

// Surrounds g with zeros; when parity differs the extra cell goes to the high
// side.
Grid2D PadCenter(const Grid2D& g, std::size_t height, std::size_t width);

// Inverse of PadCenter. Target must not exceed the source.
Grid2D CropCenter(const Grid2D& g, std::size_t height, std::size_t width);

// Crop starting at (row, col).
Grid2D CropAt(const Grid2D& g, std::size_t row, std::size_t col,
              std::size_t height, std::size_t width);

// Circular translation: out(r, c) = g((r - dr) mod h, (c - dc) mod w).
Grid2D CircularShift(const Grid2D& g, long dr, long dc);

// Samples g at fractional (row, col); outside the grid reads as 0.
double SampleBilinear(const Grid2D& g, double row, double col);

}  // namespace maxsive

#endif  // MAXSIVE_RESAMPLE_H_
