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

#include "maxsive/decoder.h"

#include <algorithm>
#include <cmath>

#include "maxsive/error.h"
#include "maxsive/fourier.h"

namespace maxsive {

LatentTensor ClipSpectralPeaks(const LatentTensor& z, double factor) {
  if (!(factor > 0.0)) return z;
  return MapChannels(z, [factor](const Grid2D& plane) {
    ComplexGrid2D spec = Dft2(plane);
    std::vector<double> mags(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) mags[i] = std::abs(spec.values()[i]);
    std::vector<double> sorted = mags;
    const std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(mid),
                     sorted.end());
    const double limit = factor * sorted[mid];
    // Decide per conjugate pair so the spectrum stays Hermitian.
    const std::size_t h = spec.height(), w = spec.width();
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const std::size_t partner = ((h - r) % h) * w + (w - c) % w;
        if (std::max(mags[r * w + c], mags[partner]) > limit) spec(r, c) = 0.0;
      }
    }
    return Idft2(spec);
  });
}

DecodePlan PlanDecode(const LatentTensor& z, const DecoderConfig& cfg) {
  DecodePlan plan;
  if (cfg.correct_geometry) {
    try {
      plan.estimate = DetectAngle(z, cfg.tmpl);
      plan.template_found = plan.estimate.normalized_margin >= cfg.presence_margin;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoTemplate) throw;
    }
  }
  if (!plan.template_found) {
    plan.candidates.push_back(z);
    return plan;
  }
  plan.candidates = Correct(ClipSpectralPeaks(z, cfg.clip_factor), plan.estimate,
                            cfg.tmpl.base_angle);
  return plan;
}

Detection ScorePlan(const DecodePlan& plan, const ShuffleKeySet& keys,
                    const CodecLayout& layout, std::span<const double> watermark) {
  Detection best;
  best.template_found = plan.template_found;
  best.theta_hat = plan.estimate.theta_hat;
  best.scale_flag = plan.estimate.scale_flag;
  best.scale_hat = plan.estimate.scale_hat;
  best.normalized_margin = plan.estimate.normalized_margin;
  best.candidate_count = plan.candidates.size();
  best.score = -2.0;
  for (std::size_t i = 0; i < plan.candidates.size(); ++i) {
    const Score s = ScoreWatermark(watermark, ExtractWatermark(plan.candidates[i], keys, layout));
    if (s.value > best.score) {
      best.score = s.value;
      best.degenerate = s.degenerate;
      best.candidate = i;
    }
  }
  return best;
}

Detection Decode(const LatentTensor& z, const ShuffleKeySet& keys, const CodecLayout& layout,
                 std::span<const double> watermark, const DecoderConfig& cfg) {
  return ScorePlan(PlanDecode(z, cfg), keys, layout, watermark);
}

}  // namespace maxsive
