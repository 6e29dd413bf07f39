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

#ifndef MAXSIVE_FOURIER_H_
#define MAXSIVE_FOURIER_H_

#include "maxsive/grid.h"

namespace maxsive {

// Unnormalized forward DFT:
//   I(k1,k2) = sum_{p1,p2} i(p1,p2) exp(-2*pi*j*(k1 p1/N1 + k2 p2/N2)).
ComplexGrid2D Dft2(const Grid2D& g);

// Complex-to-complex forward/inverse transforms. The inverse carries the
// 1/(N1*N2) factor so that Idft2Complex(Dft2Complex(x)) == x.
ComplexGrid2D Dft2Complex(const ComplexGrid2D& g);
ComplexGrid2D Idft2Complex(const ComplexGrid2D& g);

// Inverse DFT of a spectrum that should be conjugate symmetric. The imaginary
// residue of the result must stay within
//   tolerance * max(1, max |real part|)
// or kSymmetryViolation is thrown.
inline constexpr double kImagResidueTolerance = 1e-9;
Grid2D Idft2(const ComplexGrid2D& spectrum,
             double tolerance = kImagResidueTolerance);

// Quadrant swap moving the DC bin from (0,0) to (h/2, w/2). Both dimensions
// must be even.
ComplexGrid2D CenterShift(const ComplexGrid2D& g);
ComplexGrid2D UncenterShift(const ComplexGrid2D& g);
Grid2D CenterShift(const Grid2D& g);

// |CenterShift(Dft2(g))|.
Grid2D CenteredMagnitude(const Grid2D& g);

}  // namespace maxsive

#endif  // MAXSIVE_FOURIER_H_
