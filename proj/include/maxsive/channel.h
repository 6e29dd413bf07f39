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

#ifndef MAXSIVE_CHANNEL_H_
#define MAXSIVE_CHANNEL_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "maxsive/attacks.h"
#include "maxsive/ddim.h"
#include "maxsive/grid.h"
#include "maxsive/xtemplate.h"

namespace maxsive {

enum class ChannelMode { kIdentity, kDdim, kDdimNoisy };

ChannelMode ParseChannelMode(const std::string& text);  // identity|ddim|ddim-noisy
std::string ChannelModeName(ChannelMode mode);

struct DdimConfig {
  int steps = 50;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  std::string denoiser = "zero";
  double denoiser_param = 0.0;
  std::uint64_t denoiser_seed = 0;
};

// Stand-in for generation, distortion and inversion.
//   identity:   z'_T = attack(z_T) + N(0, sigma^2)
//   ddim:       z'_T = inverse(attack(reverse(z_T, template hook)))
//   ddim-noisy: as ddim, with N(0, sigma^2) added to z_0 after the attacks.
// With proxy_scale > 1 the attacks run on a block-replicated copy of z_0.
struct ChannelConfig {
  ChannelMode mode = ChannelMode::kDdim;
  DdimConfig ddim;
  double sigma = 0.0;
  AttackPipeline attacks;
  std::size_t proxy_scale = 1;
  bool inject_template = true;

  // Throws kConfig (negative sigma, sigma set in noiseless ddim mode, ...).
  void Validate() const;
};

// Template injection hook for reverse sampling.
InjectionHook TemplateHook(const TemplateMask& mask, double eta);

// Generation half of the channel: reverse sampling with the template hook
// (ddim modes only; identity mode returns z_T).
LatentTensor Generate(const LatentTensor& z_T, const ChannelConfig& cfg,
                      const TemplateConfig& tmpl);

// Deterministic in (z_T, cfg, tmpl, noise_seed).
LatentTensor Transmit(const LatentTensor& z_T, const ChannelConfig& cfg,
                      const TemplateConfig& tmpl, std::uint64_t noise_seed);

}  // namespace maxsive

#endif  // MAXSIVE_CHANNEL_H_
