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

#include "maxsive/channel.h"

#include <cmath>

#include "maxsive/error.h"
#include "maxsive/random.h"

namespace maxsive {
namespace {

void AddNoise(LatentTensor& z, double sigma, std::uint64_t seed) {
  if (sigma == 0.0) return;
  Rng rng(DeriveSeed(Seed256::FromU64(seed), "channel-noise", 0));
  for (Grid2D& plane : z.planes()) {
    for (double& v : plane.values()) v += sigma * rng.Normal();
  }
}

DdimSchedule ScheduleFor(const ChannelConfig& cfg) {
  return MakeSchedule(cfg.ddim.steps, cfg.ddim.beta_start, cfg.ddim.beta_end);
}

}  // namespace

ChannelMode ParseChannelMode(const std::string& text) {
  if (text == "identity") return ChannelMode::kIdentity;
  if (text == "ddim") return ChannelMode::kDdim;
  if (text == "ddim-noisy" || text == "ddim_noisy") return ChannelMode::kDdimNoisy;
  throw Error(ErrorCode::kConfig, "unknown channel mode '" + text + "'");
}

std::string ChannelModeName(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::kIdentity: return "identity";
    case ChannelMode::kDdim: return "ddim";
    case ChannelMode::kDdimNoisy: return "ddim-noisy";
  }
  return "?";
}

void ChannelConfig::Validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::kConfig, "channel.sigma must be >= 0");
  if (mode == ChannelMode::kDdim && sigma != 0.0) {
    throw Error(ErrorCode::kConfig, "channel mode ddim is noiseless; use ddim-noisy for sigma > 0");
  }
  if (proxy_scale == 0) throw Error(ErrorCode::kConfig, "channel.proxy_scale must be >= 1");
  MakeSchedule(ddim.steps, ddim.beta_start, ddim.beta_end);
  MakeDenoiser(ddim.denoiser, ddim.denoiser_param, ddim.denoiser_seed);
}

InjectionHook TemplateHook(const TemplateMask& mask, double eta) {
  return [mask, eta](const LatentTensor& z0, int) { return Inject(z0, mask, eta); };
}

LatentTensor Generate(const LatentTensor& z_T, const ChannelConfig& cfg,
                      const TemplateConfig& tmpl) {
  cfg.Validate();
  if (cfg.mode == ChannelMode::kIdentity) return z_T;
  const auto denoiser = MakeDenoiser(cfg.ddim.denoiser, cfg.ddim.denoiser_param,
                                     cfg.ddim.denoiser_seed);
  InjectionHook hook;
  if (cfg.inject_template && tmpl.eta > 0.0) {
    hook = TemplateHook(BuildMask(z_T.height(), z_T.width(), tmpl), tmpl.eta);
  }
  return Reverse(z_T, *denoiser, ScheduleFor(cfg), hook);
}

LatentTensor Transmit(const LatentTensor& z_T, const ChannelConfig& cfg,
                      const TemplateConfig& tmpl, std::uint64_t noise_seed) {
  cfg.Validate();
  if (cfg.mode == ChannelMode::kIdentity) {
    LatentTensor z = ApplyPipeline(cfg.attacks, z_T, cfg.proxy_scale);
    AddNoise(z, cfg.sigma, noise_seed);
    return z;
  }
  LatentTensor z0 = ApplyPipeline(cfg.attacks, Generate(z_T, cfg, tmpl), cfg.proxy_scale);
  AddNoise(z0, cfg.sigma, noise_seed);
  const auto denoiser = MakeDenoiser(cfg.ddim.denoiser, cfg.ddim.denoiser_param,
                                     cfg.ddim.denoiser_seed);
  return Inverse(z0, *denoiser, ScheduleFor(cfg));
}

}  // namespace maxsive
