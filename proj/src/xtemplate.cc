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

#include "maxsive/xtemplate.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "maxsive/error.h"
#include "maxsive/fourier.h"
#include "maxsive/resample.h"
#include "maxsive/stats.h"

namespace maxsive {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMarginExclusionDeg = 5.0;
constexpr double kLatticeTol = 1e-9;
// |scale_hat - 1| below this counts as "not rescaled".
constexpr double kScaleTolerance = 0.03;

double Mod(double x, double m) {
  double r = std::fmod(x, m);
  if (r < 0) r += m;
  if (r >= m) r -= m;
  return r;
}

double Median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

// center +/- round(r * (cos a, sin a)) as signed (row, col) offsets.
std::pair<long, long> Offset(double radius, double angle_deg) {
  return {std::lround(radius * std::cos(angle_deg * kDegToRad)),
          std::lround(radius * std::sin(angle_deg * kDegToRad))};
}

// Template point offsets for line 1 at `theta`.
std::vector<std::pair<long, long>> PointOffsets(double theta, double radius_scale,
                                                const TemplateConfig& cfg) {
  std::vector<std::pair<long, long>> out;
  for (double a : {theta, theta + cfg.theta_d}) {
    for (double rho : cfg.radii) {
      const auto [d1, d2] = Offset(rho * radius_scale, a);
      out.emplace_back(d1, d2);
      out.emplace_back(-d1, -d2);
    }
  }
  return out;
}

double ReadOrZero(const Grid2D& g, long r, long c) {
  if (r < 0 || c < 0 || r >= static_cast<long>(g.height()) || c >= static_cast<long>(g.width())) {
    return 0.0;
  }
  return g(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

std::vector<double> LineProfile(const Grid2D& mag, const TemplateConfig& cfg) {
  const double half = static_cast<double>(mag.width()) / 2.0;
  const double r0 = static_cast<double>(mag.height()) / 2.0;
  const double c0 = half;
  std::vector<double> radii;
  for (double r = cfg.line_inner * half; r <= cfg.line_outer * half + 1e-9; r += cfg.line_spacing) {
    radii.push_back(r);
    radii.push_back(-r);
  }
  const std::size_t n = static_cast<std::size_t>(std::llround(180.0 / cfg.step));
  std::vector<double> profile(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = static_cast<double>(k) * cfg.step;
    double sum = 0.0;
    for (double a : {theta, theta + cfg.theta_d}) {
      const double ca = std::cos(a * kDegToRad), sa = std::sin(a * kDegToRad);
      for (double r : radii) sum += SampleBilinear(mag, r0 + r * ca, c0 + r * sa);
    }
    profile[k] = sum / static_cast<double>(2 * radii.size());
  }
  return profile;
}

std::vector<double> PointProfile(const Grid2D& mag, const TemplateConfig& cfg) {
  const double half = static_cast<double>(mag.width()) / 2.0;
  const long r0 = static_cast<long>(mag.height() / 2), c0 = static_cast<long>(mag.width() / 2);
  const std::size_t n = static_cast<std::size_t>(std::llround(180.0 / cfg.step));
  std::vector<double> profile(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto offsets = PointOffsets(static_cast<double>(k) * cfg.step, half, cfg);
    double sum = 0.0;
    for (const auto& [d1, d2] : offsets) sum += ReadOrZero(mag, r0 + d1, c0 + d2);
    profile[k] = sum / static_cast<double>(offsets.size());
  }
  return profile;
}

Grid2D UndoScale(const Grid2D& g, double scale) {
  const std::size_t h = g.height(), w = g.width();
  const auto nh = static_cast<std::size_t>(std::llround(static_cast<double>(h) / scale));
  const auto nw = static_cast<std::size_t>(std::llround(static_cast<double>(w) / scale));
  if (nh == h && nw == w) return g;
  const Grid2D resized = Resize(g, nh, nw);
  if (nh <= h && nw <= w) return PadCenter(resized, h, w);
  if (nh >= h && nw >= w) return CropCenter(resized, h, w);
  throw Error(ErrorCode::kShape, "anisotropic scale undo is not supported");
}

}  // namespace

void TemplateConfig::Validate() const {
  if (!(theta_d > 0.0 && theta_d < 180.0)) throw Error(ErrorCode::kConfig, "template.theta_d must lie in (0, 180)");
  if (!std::isfinite(base_angle)) throw Error(ErrorCode::kConfig, "template.base_angle must be finite");
  if (radii.empty()) throw Error(ErrorCode::kConfig, "template.radii must not be empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 1.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(ErrorCode::kConfig, "template.radii must be strictly increasing in (0, 1]");
    }
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::kConfig, "template.eta must be >= 0");
  if (!(step > 0.0 && step <= 45.0)) throw Error(ErrorCode::kConfig, "template.step must lie in (0, 45]");
  const double count = 180.0 / step;
  if (std::abs(count - std::round(count)) > 1e-9) {
    throw Error(ErrorCode::kConfig, "template.step must divide 180");
  }
  if (!(kappa > 0.0)) throw Error(ErrorCode::kConfig, "template.kappa must be > 0");
  if (!(line_inner > 0.0 && line_inner < line_outer && line_outer <= 1.0 && line_spacing > 0.0)) {
    throw Error(ErrorCode::kConfig, "template line sampling range is invalid");
  }
}

TemplateMask BuildMask(std::size_t height, std::size_t width, const TemplateConfig& cfg) {
  cfg.Validate();
  if (height != width || height % 2 != 0 || height == 0) {
    throw Error(ErrorCode::kUnsupportedShape, "template mask needs a square grid of even size");
  }
  const long r0 = static_cast<long>(height / 2), c0 = static_cast<long>(width / 2);
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const auto& [d1, d2] : PointOffsets(cfg.base_angle, static_cast<double>(width) / 2.0, cfg)) {
    const long r = r0 + d1, c = c0 + d2;
    if (r < 0 || c < 0 || r >= static_cast<long>(height) || c >= static_cast<long>(width)) {
      throw Error(ErrorCode::kGeometryDegeneracy, "template point falls outside the grid");
    }
    unique.emplace(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  }
  if (unique.size() < 12) {
    throw Error(ErrorCode::kGeometryDegeneracy,
                "template collapses to " + std::to_string(unique.size()) + " distinct points");
  }
  TemplateMask mask;
  mask.height = height;
  mask.width = width;
  mask.points.assign(unique.begin(), unique.end());
  mask.grid = Grid2D(height, width);
  for (const auto& [r, c] : mask.points) mask.grid(r, c) = 1.0;
  return mask;
}

LatentTensor Inject(const LatentTensor& z0, const TemplateMask& mask, double eta) {
  if (z0.height() != mask.height || z0.width() != mask.width) {
    throw Error(ErrorCode::kContract, "template mask does not match latent dimensions");
  }
  if (eta == 0.0) return z0;
  return MapChannels(z0, [&](const Grid2D& plane) {
    ComplexGrid2D spec = CenterShift(Dft2(plane));
    std::vector<double> off_mask;
    off_mask.reserve(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (mask.grid.values()[i] == 0.0) off_mask.push_back(std::abs(spec.values()[i]));
    }
    const double add = eta * PopulationStd(off_mask);
    for (const auto& [r, c] : mask.points) spec(r, c) += add;
    try {
      return Idft2(UncenterShift(spec));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSymmetryViolation) throw;
      throw Error(ErrorCode::kInjection, e.what());
    }
  });
}

Grid2D MagnitudeMap(const LatentTensor& z) {
  if (z.channels() == 0) throw Error(ErrorCode::kInvalidInput, "latent has no channels");
  Grid2D acc(z.height(), z.width());
  for (const Grid2D& plane : z.planes()) {
    const Grid2D m = CenteredMagnitude(plane);
    for (std::size_t i = 0; i < acc.size(); ++i) acc.values()[i] += m.values()[i];
  }
  const double inv = 1.0 / static_cast<double>(z.channels());
  for (double& v : acc.values()) v *= inv;
  return acc;
}

AngleEstimate DetectAngle(const LatentTensor& z, const TemplateConfig& cfg) {
  cfg.Validate();
  const Grid2D mag = MagnitudeMap(z);
  double max_abs = 0.0;
  for (double v : mag.values()) max_abs = std::max(max_abs, v);
  if (!(PopulationStd(mag.values()) > 1e-12 * std::max(1.0, max_abs))) {
    throw Error(ErrorCode::kNoTemplate, "magnitude spectrum is flat");
  }
  AngleEstimate est;
  est.profile = cfg.line_search ? LineProfile(mag, cfg) : PointProfile(mag, cfg);
  const std::size_t n = est.profile.size();
  std::size_t best = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (est.profile[k] > est.profile[best]) best = k;
  }
  est.theta_hat = static_cast<double>(best) * cfg.step;
  est.mean_magnitude = est.profile[best];
  double runner_up = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = std::abs(static_cast<double>(k) - static_cast<double>(best)) * cfg.step;
    if (std::min(d, 180.0 - d) >= kMarginExclusionDeg - 1e-9) {
      runner_up = std::max(runner_up, est.profile[k]);
    }
  }
  est.runner_up_margin = runner_up < 0.0 ? 0.0 : std::max(0.0, est.mean_magnitude - runner_up);
  const double median = Median(std::vector<double>(mag.values().begin(), mag.values().end()));
  est.normalized_margin = median > 0.0 ? est.runner_up_margin / median : 0.0;
  est.scale_flag = DetectScale(mag, est.theta_hat, cfg);
  est.scale_hat = EstimateScale(mag, est.theta_hat, cfg);
  return est;
}

double EstimateScale(const Grid2D& magnitude, double theta_hat, const TemplateConfig& cfg) {
  // The injected points sit on rounded lattice offsets; track those exactly.
  const double half = static_cast<double>(magnitude.width()) / 2.0;
  const double r0 = static_cast<double>(magnitude.height()) / 2.0;
  const double delta = (theta_hat - cfg.base_angle) * kDegToRad;
  const double cd = std::cos(delta), sd = std::sin(delta);
  std::vector<std::pair<double, double>> offsets;
  for (const auto& [d1, d2] : PointOffsets(cfg.base_angle, half, cfg)) {
    offsets.emplace_back(d1 * cd - d2 * sd, d1 * sd + d2 * cd);
  }
  double best_s = 1.0, best_v = -1.0;
  for (int i = 50; i <= 200; ++i) {
    const double s = i / 100.0;
    double v = 0.0;
    for (const auto& [o1, o2] : offsets) v += SampleBilinear(magnitude, r0 + o1 / s, half + o2 / s);
    if (v > best_v) {
      best_v = v;
      best_s = s;
    }
  }
  return best_s;
}

bool DetectScale(const Grid2D& magnitude, double theta_hat, const TemplateConfig& cfg) {
  const double outer = cfg.radii.back() * static_cast<double>(magnitude.width()) / 2.0;
  const long r0 = static_cast<long>(magnitude.height() / 2);
  const long c0 = static_cast<long>(magnitude.width() / 2);
  double best_ratio = 0.0;
  for (double theta : {theta_hat - cfg.step, theta_hat, theta_hat + cfg.step}) {
    for (double a : {theta, theta + cfg.theta_d}) {
      const auto [d1, d2] = Offset(outer, a);
      for (int sign : {1, -1}) {
        const long r = r0 + sign * d1, c = c0 + sign * d2;
        std::vector<double> ring;
        for (long dr = -1; dr <= 1; ++dr) {
          for (long dc = -1; dc <= 1; ++dc) {
            if (dr != 0 || dc != 0) ring.push_back(ReadOrZero(magnitude, r + dr, c + dc));
          }
        }
        const double med = Median(ring);
        const double peak = ReadOrZero(magnitude, r, c);
        const double ratio = med > 0.0 ? peak / med : (peak > 0.0 ? INFINITY : 0.0);
        best_ratio = std::max(best_ratio, ratio);
      }
    }
  }
  return !(best_ratio >= cfg.kappa);
}

bool DetectScale(const LatentTensor& z, double theta_hat, const TemplateConfig& cfg) {
  return DetectScale(MagnitudeMap(z), theta_hat, cfg);
}

double Gamma(double theta_deg) {
  if (!std::isfinite(theta_deg)) throw Error(ErrorCode::kInvalidInput, "angle must be finite");
  const double t = Mod(theta_deg, 90.0) * kDegToRad;
  return std::sin(t) + std::cos(t);
}

std::vector<double> ScaleSweep() {
  std::vector<double> out;
  for (int i = 0; i <= 10; ++i) out.push_back(0.75 + 0.05 * i);
  return out;
}

std::vector<LatentTensor> Correct(const LatentTensor& z, const AngleEstimate& estimate,
                                  double injected_base) {
  const double theta_a = Mod(estimate.theta_hat - injected_base, 180.0);
  std::vector<LatentTensor> out;
  for (double theta_b : {theta_a, theta_a + 180.0}) {
    LatentTensor rotated = MapChannels(z, [&](const Grid2D& g) { return Rotate(g, -theta_b); });
    const double r90 = Mod(theta_b, 90.0);
    const bool on_lattice = std::min(r90, 90.0 - r90) < kLatticeTol;
    const bool rescaled = std::abs(estimate.scale_hat - 1.0) >= kScaleTolerance;
    if (!on_lattice) {
      const double gamma = Gamma(theta_b);
      out.push_back(MapChannels(rotated, [&](const Grid2D& g) { return UndoScale(g, gamma); }));
      if (!rescaled) {
        out.push_back(std::move(rotated));
      } else {
        // A rescale can pull the angle estimate off the lattice by a degree.
        const double s = estimate.scale_hat;
        out.push_back(MapChannels(rotated, [&](const Grid2D& g) { return UndoScale(g, s); }));
        if (theta_b == theta_a) {
          out.push_back(MapChannels(z, [&](const Grid2D& g) { return UndoScale(g, s); }));
        }
      }
    } else if (estimate.scale_flag) {
      std::vector<double> scales = ScaleSweep();
      const bool covered = std::any_of(scales.begin(), scales.end(), [&](double s) {
        return std::abs(s - estimate.scale_hat) < 0.005;
      });
      if (!covered) scales.push_back(estimate.scale_hat);
      for (double s : scales) {
        out.push_back(MapChannels(rotated, [&](const Grid2D& g) { return UndoScale(g, s); }));
      }
    } else {
      if (rescaled) {
        const double s = estimate.scale_hat;
        out.push_back(MapChannels(rotated, [&](const Grid2D& g) { return UndoScale(g, s); }));
      }
      out.push_back(std::move(rotated));
    }
  }
  return out;
}

}  // namespace maxsive
