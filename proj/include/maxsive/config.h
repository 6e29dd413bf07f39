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

#ifndef MAXSIVE_CONFIG_H_
#define MAXSIVE_CONFIG_H_

#include <string>
#include <vector>

#include "maxsive/experiment.h"

namespace maxsive {

// Dotted configuration keys:
//   ddim.steps ddim.beta_start ddim.beta_end ddim.denoiser ddim.denoiser_param
//   ddim.denoiser_seed
//   template.theta_d template.base_angle template.eta template.radii
//   template.step template.kappa template.line_search
//   channel.mode channel.sigma channel.domain (latent|pixel_proxy)
//   channel.proxy_scale channel.inject_template
//   decoder.presence_margin decoder.clip_factor decoder.correct_geometry
//   codec.f_hw codec.f_c codec.h codec.w codec.c
//   experiment.trials experiment.fpr experiment.seed experiment.negatives
//   experiment.negative_fpr
// template.radii takes a comma-separated list. Throws kConfig on unknown
// keys or malformed values.
void ApplyConfigKey(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// "key=value".
void ApplyConfigAssignment(ExperimentConfig& cfg, const std::string& assignment);

// JSON object; nested objects are flattened into dotted keys.
void ApplyConfigJson(ExperimentConfig& cfg, const std::string& text);

std::vector<std::string> ConfigKeys();

}  // namespace maxsive

#endif  // MAXSIVE_CONFIG_H_
