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

#ifndef MAXSIVE_DECODER_H_
#define MAXSIVE_DECODER_H_

#include <cstddef>
#include <vector>

#include "maxsive/codec.h"
#include "maxsive/grid.h"
#include "maxsive/xtemplate.h"

namespace maxsive {

struct DecoderConfig {
  TemplateConfig tmpl;
  // Run template detection and geometric correction at all.
  bool correct_geometry = true;
  // The template counts as present when the angle search margin, divided by
  // the median spectral magnitude, reaches this value. Unwatermarked
  // Gaussian latents stay near 0.05; a template survives at several units.
  double presence_margin = 0.5;
  // Before correction, DFT bins larger than clip_factor times the channel's
  // median magnitude are zeroed. The template is a handful of very strong
  // bins; left in place it dominates the payload after inversion. 0 disables.
  double clip_factor = 6.0;
};

// Zeroes, per channel, the DFT bins whose magnitude exceeds factor times the
// median magnitude of that channel.
LatentTensor ClipSpectralPeaks(const LatentTensor& z, double factor);

struct DecodePlan {
  bool template_found = false;
  AngleEstimate estimate;               // valid when template_found
  std::vector<LatentTensor> candidates; // at least one
};

// Detection, presence gate, peak clipping and correction candidates. When no
// template is found the only candidate is z itself.
DecodePlan PlanDecode(const LatentTensor& z, const DecoderConfig& cfg);

struct Detection {
  double score = 0.0;
  bool degenerate = false;
  bool template_found = false;
  double theta_hat = 0.0;
  bool scale_flag = false;
  double scale_hat = 1.0;
  double normalized_margin = 0.0;
  std::size_t candidate = 0;  // index of the winning candidate
  std::size_t candidate_count = 0;
};

// Best codec score over the plan's candidates.
Detection Decode(const LatentTensor& z, const ShuffleKeySet& keys, const CodecLayout& layout,
                 std::span<const double> watermark, const DecoderConfig& cfg);
Detection ScorePlan(const DecodePlan& plan, const ShuffleKeySet& keys,
                    const CodecLayout& layout, std::span<const double> watermark);

}  // namespace maxsive

#endif  // MAXSIVE_DECODER_H_
