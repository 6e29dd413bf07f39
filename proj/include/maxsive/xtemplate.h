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

#ifndef MAXSIVE_XTEMPLATE_H_
#define MAXSIVE_XTEMPLATE_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "maxsive/grid.h"

namespace maxsive {

struct TemplateConfig {
  double theta_d = 60.0;     // angle between the two lines, degrees
  double base_angle = 45.0;  // orientation of line 1 at injection, degrees
  std::vector<double> radii = {0.2, 0.3, 0.4, 0.5};  // fractions of w/2
  double eta = 5.0;          // injection strength
  double step = 1.0;         // candidate angle grid, degrees
  double kappa = 1.5;        // peak-to-ring ratio for the scale check

  // Angle search objective. With line_search the mean is taken along both
  // full lines (radii line_inner..line_outer of w/2, line_spacing pixels
  // apart, bilinear magnitude lookup), which still finds the template after
  // its radii have been rescaled. Otherwise the template points themselves
  // are rotated to each candidate and read with nearest-bin lookup.
  bool line_search = true;
  double line_inner = 0.1;
  double line_outer = 0.6;
  double line_spacing = 0.5;

  // Throws kConfig when a field is out of range.
  void Validate() const;
};

// X-shaped point set on the centered spectrum plus its binary grid.
struct TemplateMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::pair<std::size_t, std::size_t>> points;  // (row, col)
  Grid2D grid;
};

// For each line angle a in {base, base + theta_d} and radius fraction rho,
// places center +/- round(rho * w/2 * (cos a, sin a)), with (row, col)
// components and rounding half away from zero. Duplicates are merged.
// Throws kGeometryDegeneracy when fewer than 12 distinct points remain or a
// point leaves the grid.
TemplateMask BuildMask(std::size_t height, std::size_t width, const TemplateConfig& cfg);

// Per channel: G = center_shift(dft2(x)); s = population std of |G| over the
// bins outside the mask; G += eta * s * M on the real part; back to a real
// grid. The mask is 180-degree symmetric, so the result stays real.
LatentTensor Inject(const LatentTensor& z0, const TemplateMask& mask, double eta);

// Mean over channels of |center_shift(dft2(channel))|.
Grid2D MagnitudeMap(const LatentTensor& z);

struct AngleEstimate {
  double theta_hat = 0.0;        // degrees in [0, 180)
  double mean_magnitude = 0.0;   // objective at theta_hat
  bool scale_flag = false;
  double scale_hat = 1.0;        // spatial rescale factor, see EstimateScale
  double runner_up_margin = 0.0; // best minus best candidate >= 5 degrees away
  double normalized_margin = 0.0;  // runner_up_margin / median magnitude
  std::vector<double> profile;   // objective per candidate, index k <-> k*step
};

// Exhaustive argmax over [0, 180) of the template objective. Throws
// kNoTemplate when the magnitude map is flat. scale_flag is filled in with
// DetectScale.
AngleEstimate DetectAngle(const LatentTensor& z, const TemplateConfig& cfg);

// True (rescaled) unless some outermost-radius template point at theta_hat or
// theta_hat +/- step stands out from the median of its 8-neighbour ring by a
// factor of at least kappa.
bool DetectScale(const Grid2D& magnitude, double theta_hat, const TemplateConfig& cfg);
bool DetectScale(const LatentTensor& z, double theta_hat, const TemplateConfig& cfg);

// Spatial rescale factor s in [0.5, 2] (step 0.01) that best explains the
// template: argmax of the bilinear mean magnitude at the injected point
// offsets, rotated by theta_hat - base_angle and divided by s.
double EstimateScale(const Grid2D& magnitude, double theta_hat, const TemplateConfig& cfg);

// sin(t) + cos(t) with t = theta mod 90 degrees: the divisor that maps an
// N-wide rotated grid to the side of its largest axis-aligned content square.
double Gamma(double theta_deg);

// Scales tried when the template says "rescaled" but not rotated.
std::vector<double> ScaleSweep();

// Correction candidates for z'_T. theta_a = (theta_hat - injected_base) mod
// 180; for each branch theta_b in {theta_a, theta_a + 180} the latent is
// rotated by -theta_b; off the 90-degree lattice it is then resized to
// round(N / Gamma(theta_b)) and zero padded back. On the lattice with
// scale_flag set, every scale of ScaleSweep() is undone instead, plus
// scale_hat when the sweep does not contain it. Off the lattice, when
// scale_hat shows no rescale, the rotation alone is added (a rotation
// without crop); when it does, the undo of scale_hat after the rotation and,
// for the first branch, on z itself. On the lattice without scale_flag the
// undo of scale_hat is used when it departs from 1.
std::vector<LatentTensor> Correct(const LatentTensor& z, const AngleEstimate& estimate,
                                  double injected_base);

}  // namespace maxsive

#endif  // MAXSIVE_XTEMPLATE_H_
