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

#ifndef MAXSIVE_ATTACKS_H_
#define MAXSIVE_ATTACKS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maxsive/grid.h"

namespace maxsive {

enum class AttackKind {
  kRotateCropRescale,
  kRotatePad,
  kScaleCrop,
  kScalePad,
  kTranslateRowColRemove,
  kCropPercent,
  kShear,
  kGaussianNoise,
  kGaussianBlur,
  kMedianFilter,
  kBrightness,
  kContrast,
  kJpegProxy,
  kEraseRegion,
};

struct ParamInfo {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> default_value;  // absent: the parameter is required
  bool integer = false;
  bool odd = false;
};

struct AttackInfo {
  AttackKind kind;
  std::string name;
  std::vector<ParamInfo> params;
  std::string summary;
};

// All kinds in declaration order.
const std::vector<AttackInfo>& AttackCatalog();
const AttackInfo& InfoFor(AttackKind kind);

// One distortion. values[i] belongs to InfoFor(kind).params[i].
struct AttackSpec {
  AttackKind kind = AttackKind::kRotatePad;
  std::vector<double> values;

  double Param(std::string_view name) const;
  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

// Empty pipeline == no distortion ("clean").
using AttackPipeline = std::vector<AttackSpec>;

// Validates against the catalog and fills defaults; throws kConfig.
AttackSpec MakeAttack(AttackKind kind, const std::map<std::string, double>& params);

// Grammar: "clean" | kind [ "(" [name=value {, name=value}] ")" ] { "|" ... }.
// Throws kParse with the character position of the problem.
AttackPipeline ParsePipeline(std::string_view text);
std::string FormatAttack(const AttackSpec& spec);
std::string FormatPipeline(const AttackPipeline& pipeline);

// Applies one distortion to a single plane; output has the input shape.
// `stream` decorrelates seeded noise between planes that share a spec.
Grid2D ApplyAttack(const AttackSpec& spec, const Grid2D& g, std::uint64_t stream = 0);

// Applies the pipeline to every channel (channel index is the noise stream).
// With proxy_scale > 1 each plane is first block-replicated by that factor,
// attacked, then block-averaged back.
LatentTensor ApplyPipeline(const AttackPipeline& pipeline, const LatentTensor& z,
                           std::size_t proxy_scale = 1);

Grid2D BlockUpsample(const Grid2D& g, std::size_t factor);
Grid2D BlockDownsample(const Grid2D& g, std::size_t factor);

// Half side, relative to the grid half side, of the largest centered
// axis-aligned square inside the image of the grid under the linear map
// {a11, a12, a21, a22}: 1 / max over corners of ||A^{-1}(+-1, +-1)||_inf.
double InscribedSquareFraction(const std::array<double, 4>& matrix);

// Net rotation angle of the geometric steps in the pipeline, if any.
std::optional<double> PipelineRotation(const AttackPipeline& pipeline);

// Resolves "--attacks": a preset name (file <preset dir>/<name>.txt), a path
// to a preset file, or an inline pipeline. Preset files hold one pipeline
// per line; blank lines and lines starting with '#' are skipped.
std::vector<AttackPipeline> ResolveAttacks(const std::string& arg);
std::vector<AttackPipeline> ParsePresetText(const std::string& text);

}  // namespace maxsive

#endif  // MAXSIVE_ATTACKS_H_
