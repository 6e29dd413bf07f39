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

#include "maxsive/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "maxsive/error.h"

namespace maxsive {
namespace {

double ToDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw Error(ErrorCode::kConfig, key + ": '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t ToU64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorCode::kConfig, key + ": '" + v + "' is not a non-negative integer");
  }
  return out;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::kConfig, key + ": '" + v + "' is not a boolean");
}

std::vector<double> ToList(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ToDouble(key, item));
  if (out.empty()) throw Error(ErrorCode::kConfig, key + " needs at least one value");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> kSetters = {
      {"ddim.steps", [](auto& c, auto& k, auto& v) { c.channel.ddim.steps = static_cast<int>(ToU64(k, v)); }},
      {"ddim.beta_start", [](auto& c, auto& k, auto& v) { c.channel.ddim.beta_start = ToDouble(k, v); }},
      {"ddim.beta_end", [](auto& c, auto& k, auto& v) { c.channel.ddim.beta_end = ToDouble(k, v); }},
      {"ddim.denoiser", [](auto& c, auto&, auto& v) { c.channel.ddim.denoiser = v; }},
      {"ddim.denoiser_param", [](auto& c, auto& k, auto& v) { c.channel.ddim.denoiser_param = ToDouble(k, v); }},
      {"ddim.denoiser_seed", [](auto& c, auto& k, auto& v) { c.channel.ddim.denoiser_seed = ToU64(k, v); }},
      {"template.theta_d", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.theta_d = ToDouble(k, v); }},
      {"template.base_angle", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.base_angle = ToDouble(k, v); }},
      {"template.eta", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.eta = ToDouble(k, v); }},
      {"template.radii", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.radii = ToList(k, v); }},
      {"template.step", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.step = ToDouble(k, v); }},
      {"template.kappa", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.kappa = ToDouble(k, v); }},
      {"template.line_search", [](auto& c, auto& k, auto& v) { c.decoder.tmpl.line_search = ToBool(k, v); }},
      {"channel.mode", [](auto& c, auto&, auto& v) { c.channel.mode = ParseChannelMode(v); }},
      {"channel.sigma", [](auto& c, auto& k, auto& v) { c.channel.sigma = ToDouble(k, v); }},
      {"channel.domain",
       [](auto& c, auto& k, auto& v) {
         if (v == "latent") {
           c.channel.proxy_scale = 1;
         } else if (v == "pixel_proxy") {
           if (c.channel.proxy_scale <= 1) c.channel.proxy_scale = 8;
         } else {
           throw Error(ErrorCode::kConfig, k + " must be latent or pixel_proxy");
         }
       }},
      {"channel.proxy_scale", [](auto& c, auto& k, auto& v) { c.channel.proxy_scale = ToU64(k, v); }},
      {"channel.inject_template", [](auto& c, auto& k, auto& v) { c.channel.inject_template = ToBool(k, v); }},
      {"decoder.presence_margin", [](auto& c, auto& k, auto& v) { c.decoder.presence_margin = ToDouble(k, v); }},
      {"decoder.clip_factor", [](auto& c, auto& k, auto& v) { c.decoder.clip_factor = ToDouble(k, v); }},
      {"decoder.correct_geometry", [](auto& c, auto& k, auto& v) { c.decoder.correct_geometry = ToBool(k, v); }},
      {"codec.f_hw", [](auto& c, auto& k, auto& v) { c.replication.f_hw = ToU64(k, v); }},
      {"codec.f_c", [](auto& c, auto& k, auto& v) { c.replication.f_c = ToU64(k, v); }},
      {"codec.h", [](auto& c, auto& k, auto& v) { c.shape.height = ToU64(k, v); }},
      {"codec.w", [](auto& c, auto& k, auto& v) { c.shape.width = ToU64(k, v); }},
      {"codec.c", [](auto& c, auto& k, auto& v) { c.shape.channels = ToU64(k, v); }},
      {"experiment.trials", [](auto& c, auto& k, auto& v) { c.trials = ToU64(k, v); }},
      {"experiment.fpr", [](auto& c, auto& k, auto& v) { c.target_fpr = ToDouble(k, v); }},
      {"experiment.seed", [](auto& c, auto& k, auto& v) { c.seed = ToU64(k, v); }},
      {"experiment.negatives", [](auto& c, auto& k, auto& v) { c.negatives = ToU64(k, v); }},
      {"experiment.negative_fpr", [](auto& c, auto& k, auto& v) { c.negative_fpr = ToDouble(k, v); }},
  };
  return kSetters;
}

void Flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      Flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    std::string joined;
    for (const auto& e : j) {
      if (!joined.empty()) joined += ",";
      joined += e.is_string() ? e.get<std::string>() : e.dump();
    }
    out.emplace_back(prefix, joined);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

void ApplyConfigKey(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = Setters().find(key);
  if (it == Setters().end()) throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

void ApplyConfigAssignment(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kConfig, "expected key=value, got '" + assignment + "'");
  }
  ApplyConfigKey(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void ApplyConfigJson(ExperimentConfig& cfg, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  std::vector<std::pair<std::string, std::string>> pairs;
  Flatten(j, "", pairs);
  for (const auto& [k, v] : pairs) ApplyConfigKey(cfg, k, v);
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : Setters()) out.push_back(k);
  return out;
}

}  // namespace maxsive
