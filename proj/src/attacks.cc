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

#include "maxsive/attacks.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <sstream>

#include "maxsive/error.h"
#include "maxsive/key_file.h"
#include "maxsive/random.h"
#include "maxsive/resample.h"
#include "maxsive/xtemplate.h"

namespace maxsive {
namespace {

constexpr double kMaxSeed = 9007199254740992.0;  // 2^53

ParamInfo Required(std::string name, double lo, double hi, bool integer = false,
                   bool odd = false) {
  return {std::move(name), lo, hi, std::nullopt, integer, odd};
}

ParamInfo Optional(std::string name, double lo, double hi, double def, bool integer = false) {
  return {std::move(name), lo, hi, def, integer, false};
}

ParamInfo SeedParam() { return Optional("seed", 0, kMaxSeed, 0, true); }

std::size_t ToSize(double v) { return static_cast<std::size_t>(std::llround(v)); }

std::size_t Scaled(std::size_t n, double f) {
  return std::max<std::size_t>(1, ToSize(static_cast<double>(n) * f));
}

Rng SeededRng(double seed, std::string_view purpose, std::uint64_t stream) {
  return Rng(DeriveSeed(Seed256::FromU64(static_cast<std::uint64_t>(seed)), purpose, stream));
}

// Keeps the centered fraction `frac` of each side and resizes back.
Grid2D CropFractionAndRestore(const Grid2D& g, double frac) {
  const std::size_t h = g.height(), w = g.width();
  const auto mh = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(static_cast<double>(h) * frac + 1e-9)), 1, h);
  const auto mw = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::floor(static_cast<double>(w) * frac + 1e-9)), 1, w);
  return Resize(CropCenter(g, mh, mw), h, w);
}

Grid2D WarpCropRestore(const Grid2D& g, const std::array<double, 4>& a) {
  return CropFractionAndRestore(WarpLinear(g, a), InscribedSquareFraction(a));
}

Grid2D RemoveRowsCols(const Grid2D& g, std::size_t nc, std::size_t nr, double seed) {
  const std::size_t h = g.height(), w = g.width();
  if (nr >= h || nc >= w) throw Error(ErrorCode::kConfig, "cannot remove every row or column");
  Rng rng = SeededRng(seed, "rowcol-remove", 0);
  auto pick = [&rng](std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    FisherYatesShuffle(std::span<std::size_t>(idx), rng);
    std::vector<bool> removed(n, false);
    for (std::size_t i = 0; i < k; ++i) removed[idx[i]] = true;
    return removed;
  };
  const std::vector<bool> drop_r = pick(h, nr);
  const std::vector<bool> drop_c = pick(w, nc);
  Grid2D reduced(h - nr, w - nc);
  std::size_t rr = 0;
  for (std::size_t r = 0; r < h; ++r) {
    if (drop_r[r]) continue;
    std::size_t cc = 0;
    for (std::size_t c = 0; c < w; ++c) {
      if (drop_c[c]) continue;
      reduced(rr, cc++) = g(r, c);
    }
    ++rr;
  }
  return Resize(reduced, h, w);
}

Grid2D GaussianBlur(const Grid2D& g, std::size_t k) {
  if (k == 1) return g;
  const double sigma = 0.3 * ((static_cast<double>(k) - 1.0) * 0.5 - 1.0) + 0.8;
  const long half = static_cast<long>(k / 2);
  std::vector<double> kernel(k);
  for (long i = -half; i <= half; ++i) {
    kernel[static_cast<std::size_t>(i + half)] = std::exp(-0.5 * i * i / (sigma * sigma));
  }
  const double sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
  for (double& v : kernel) v /= sum;
  const long h = static_cast<long>(g.height()), w = static_cast<long>(g.width());
  Grid2D tmp(g.height(), g.width()), out(g.height(), g.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long i = -half; i <= half; ++i) {
        acc += kernel[static_cast<std::size_t>(i + half)] *
               g(static_cast<std::size_t>(r), static_cast<std::size_t>(std::clamp(c + i, 0L, w - 1)));
      }
      tmp(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (long i = -half; i <= half; ++i) {
        acc += kernel[static_cast<std::size_t>(i + half)] *
               tmp(static_cast<std::size_t>(std::clamp(r + i, 0L, h - 1)), static_cast<std::size_t>(c));
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

Grid2D MedianFilter(const Grid2D& g, std::size_t k) {
  if (k == 1) return g;
  const long half = static_cast<long>(k / 2);
  const long h = static_cast<long>(g.height()), w = static_cast<long>(g.width());
  Grid2D out(g.height(), g.width());
  std::vector<double> window(k * k);
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      std::size_t n = 0;
      for (long dr = -half; dr <= half; ++dr) {
        for (long dc = -half; dc <= half; ++dc) {
          window[n++] = g(static_cast<std::size_t>(std::clamp(r + dr, 0L, h - 1)),
                          static_cast<std::size_t>(std::clamp(c + dc, 0L, w - 1)));
        }
      }
      std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(n / 2),
                       window.end());
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = window[n / 2];
    }
  }
  return out;
}

// IJG baseline luminance quantization table.
constexpr std::array<int, 64> kLuminance = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

Grid2D JpegProxy(const Grid2D& g, int quality, double value_scale) {
  if (quality >= 100) return g;  // treated as lossless
  const int s = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<double, 64> q{};
  for (int i = 0; i < 64; ++i) q[i] = std::max(1, (kLuminance[i] * s + 50) / 100);
  std::array<double, 64> basis{};  // basis[u * 8 + x]
  for (int u = 0; u < 8; ++u) {
    const double alpha = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
    for (int x = 0; x < 8; ++x) {
      basis[u * 8 + x] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
  }
  const std::size_t h = g.height(), w = g.width();
  Grid2D out(h, w);
  std::array<double, 64> block{}, tmp{}, coef{};
  for (std::size_t br = 0; br < h; br += 8) {
    for (std::size_t bc = 0; bc < w; bc += 8) {
      for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 8; ++x) {
          block[y * 8 + x] = value_scale * g(std::min(br + y, h - 1), std::min(bc + x, w - 1));
        }
      }
      // coef = B * block * B^T
      for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x) {
          double acc = 0.0;
          for (int y = 0; y < 8; ++y) acc += basis[u * 8 + y] * block[y * 8 + x];
          tmp[u * 8 + x] = acc;
        }
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
          double acc = 0.0;
          for (int x = 0; x < 8; ++x) acc += tmp[u * 8 + x] * basis[v * 8 + x];
          coef[u * 8 + v] = std::round(acc / q[u * 8 + v]) * q[u * 8 + v];
        }
      // block = B^T * coef * B
      for (int y = 0; y < 8; ++y)
        for (int v = 0; v < 8; ++v) {
          double acc = 0.0;
          for (int u = 0; u < 8; ++u) acc += basis[u * 8 + y] * coef[u * 8 + v];
          tmp[y * 8 + v] = acc;
        }
      for (std::size_t y = 0; y < 8 && br + y < h; ++y)
        for (std::size_t x = 0; x < 8 && bc + x < w; ++x) {
          double acc = 0.0;
          for (std::size_t v = 0; v < 8; ++v) acc += tmp[y * 8 + v] * basis[v * 8 + x];
          out(br + y, bc + x) = acc / value_scale;
        }
    }
  }
  return out;
}

Grid2D EraseRegion(const Grid2D& g, double frac, double seed) {
  const std::size_t h = g.height(), w = g.width();
  const std::size_t rh = std::min(h, ToSize(std::sqrt(frac) * static_cast<double>(h)));
  const std::size_t rw =
      rh == 0 ? 0
              : std::min(w, ToSize(frac * static_cast<double>(h * w) / static_cast<double>(rh)));
  Grid2D out = g;
  if (rh == 0 || rw == 0) return out;
  Rng rng = SeededRng(seed, "erase-region", 0);
  const std::size_t top = rng.Below(h - rh + 1);
  const std::size_t left = rng.Below(w - rw + 1);
  for (std::size_t r = top; r < top + rh; ++r)
    for (std::size_t c = left; c < left + rw; ++c) out(r, c) = 0.0;
  return out;
}

std::string FormatNumber(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class PipelineParser {
 public:
  explicit PipelineParser(std::string_view text) : text_(text) {}

  AttackPipeline Parse() {
    SkipSpace();
    AttackPipeline out;
    const std::size_t start = pos_;
    const std::string first = Ident();
    if (first == "clean") {
      SkipSpace();
      if (pos_ != text_.size()) Fail("unexpected text after 'clean'");
      return out;
    }
    out.push_back(Attack(first, start));
    SkipSpace();
    while (pos_ < text_.size()) {
      Expect('|');
      SkipSpace();
      const std::size_t at = pos_;
      out.push_back(Attack(Ident(), at));
      SkipSpace();
    }
    return out;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) const {
    throw Error(ErrorCode::kParse, "position " + std::to_string(pos_) + ": " + msg);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void Expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string Ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) Fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double Number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    if (begin != end && *begin == '+') ++begin;
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || !std::isfinite(v)) Fail("expected a number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  AttackSpec Attack(const std::string& name, std::size_t name_pos) {
    const AttackInfo* info = nullptr;
    for (const AttackInfo& i : AttackCatalog()) {
      if (i.name == name) info = &i;
    }
    if (info == nullptr) {
      throw Error(ErrorCode::kParse,
                  "position " + std::to_string(name_pos) + ": unknown attack kind '" + name + "'");
    }
    std::map<std::string, double> params;
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      SkipSpace();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        for (;;) {
          SkipSpace();
          const std::size_t at = pos_;
          const std::string key = Ident();
          SkipSpace();
          Expect('=');
          SkipSpace();
          const double value = Number();
          if (!params.emplace(key, value).second) {
            throw Error(ErrorCode::kParse, "position " + std::to_string(at) +
                                               ": duplicate parameter '" + key + "'");
          }
          SkipSpace();
          if (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          Expect(')');
          break;
        }
      }
    }
    try {
      return MakeAttack(info->kind, params);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "position " + std::to_string(name_pos) + ": " + e.what());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

const std::vector<AttackInfo>& AttackCatalog() {
  static const std::vector<AttackInfo> kCatalog = {
      {AttackKind::kRotateCropRescale, "rotate_crop_rescale", {Required("theta", -360, 360)},
       "rotate, crop the largest content square, resize back"},
      {AttackKind::kRotatePad, "rotate_pad", {Required("theta", -360, 360)},
       "rotate, zero-fill the corners"},
      {AttackKind::kScaleCrop, "scale_crop", {Required("s", 1, 4)},
       "upscale by s, center crop"},
      {AttackKind::kScalePad, "scale_pad", {Required("s", 0.25, 1)},
       "downscale by s, zero pad"},
      {AttackKind::kTranslateRowColRemove, "translate_rowcol_remove",
       {Optional("nc", 0, 32, 1, true), Optional("nr", 0, 32, 1, true), SeedParam()},
       "delete nc columns and nr rows at seeded positions, resize back"},
      {AttackKind::kCropPercent, "crop_percent", {Required("p", 0, 90)},
       "remove p percent of the area from the border, resize back"},
      {AttackKind::kShear, "shear", {Optional("sx", -50, 50, 0), Optional("sy", -50, 50, 0)},
       "shear by sx/sy percent, crop to content, resize back"},
      {AttackKind::kGaussianNoise, "gaussian_noise", {Required("sigma", 0, 10), SeedParam()},
       "add seeded white noise"},
      {AttackKind::kGaussianBlur, "gaussian_blur", {Required("k", 1, 15, true, true)},
       "k x k Gaussian kernel"},
      {AttackKind::kMedianFilter, "median_filter", {Required("k", 1, 15, true, true)},
       "k x k median"},
      {AttackKind::kBrightness, "brightness", {Required("b", 0, 4)}, "multiply values by b"},
      {AttackKind::kContrast, "contrast", {Required("c", 0, 4)},
       "scale deviations from the mean by c"},
      {AttackKind::kJpegProxy, "jpeg_proxy",
       {Required("q", 1, 100, true), Optional("scale", 1e-3, 1e4, 32)},
       "8x8 block DCT quantization at quality q (values multiplied by scale first)"},
      {AttackKind::kEraseRegion, "erase_region", {Required("frac", 0, 0.9), SeedParam()},
       "zero a seeded rectangle covering frac of the area"},
  };
  return kCatalog;
}

const AttackInfo& InfoFor(AttackKind kind) {
  return AttackCatalog()[static_cast<std::size_t>(kind)];
}

double AttackSpec::Param(std::string_view name) const {
  const AttackInfo& info = InfoFor(kind);
  for (std::size_t i = 0; i < info.params.size(); ++i) {
    if (info.params[i].name == name) return values.at(i);
  }
  throw Error(ErrorCode::kContract, "attack " + info.name + " has no parameter " + std::string(name));
}

AttackSpec MakeAttack(AttackKind kind, const std::map<std::string, double>& params) {
  const AttackInfo& info = InfoFor(kind);
  for (const auto& [key, value] : params) {
    const bool known = std::any_of(info.params.begin(), info.params.end(),
                                   [&](const ParamInfo& p) { return p.name == key; });
    if (!known) throw Error(ErrorCode::kConfig, info.name + " has no parameter '" + key + "'");
  }
  AttackSpec spec{kind, {}};
  for (const ParamInfo& p : info.params) {
    const auto it = params.find(p.name);
    double v;
    if (it != params.end()) {
      v = it->second;
    } else if (p.default_value) {
      v = *p.default_value;
    } else {
      throw Error(ErrorCode::kConfig, info.name + " requires parameter '" + p.name + "'");
    }
    if (!std::isfinite(v) || v < p.min || v > p.max) {
      throw Error(ErrorCode::kConfig, info.name + "." + p.name + "=" + FormatNumber(v) +
                                          " outside [" + FormatNumber(p.min) + ", " +
                                          FormatNumber(p.max) + "]");
    }
    if (p.integer && v != std::floor(v)) {
      throw Error(ErrorCode::kConfig, info.name + "." + p.name + " must be an integer");
    }
    if (p.odd && static_cast<long long>(v) % 2 == 0) {
      throw Error(ErrorCode::kConfig, info.name + "." + p.name + " must be odd");
    }
    spec.values.push_back(v);
  }
  return spec;
}

AttackPipeline ParsePipeline(std::string_view text) { return PipelineParser(text).Parse(); }

std::string FormatAttack(const AttackSpec& spec) {
  const AttackInfo& info = InfoFor(spec.kind);
  std::string out = info.name + "(";
  for (std::size_t i = 0; i < info.params.size(); ++i) {
    if (i > 0) out += ",";
    out += info.params[i].name + "=" + FormatNumber(spec.values[i]);
  }
  return out + ")";
}

std::string FormatPipeline(const AttackPipeline& pipeline) {
  if (pipeline.empty()) return "clean";
  std::string out;
  for (std::size_t i = 0; i < pipeline.size(); ++i) {
    if (i > 0) out += "|";
    out += FormatAttack(pipeline[i]);
  }
  return out;
}

double InscribedSquareFraction(const std::array<double, 4>& a) {
  const double det = a[0] * a[3] - a[1] * a[2];
  if (std::abs(det) < 1e-12) throw Error(ErrorCode::kConfig, "singular linear map");
  double worst = 0.0;
  for (double u : {-1.0, 1.0}) {
    for (double v : {-1.0, 1.0}) {
      const double x = (a[3] * u - a[1] * v) / det;
      const double y = (-a[2] * u + a[0] * v) / det;
      worst = std::max({worst, std::abs(x), std::abs(y)});
    }
  }
  return 1.0 / worst;
}

Grid2D ApplyAttack(const AttackSpec& spec, const Grid2D& g, std::uint64_t stream) {
  const std::size_t h = g.height(), w = g.width();
  switch (spec.kind) {
    case AttackKind::kRotateCropRescale: {
      const double theta = spec.Param("theta");
      return CropFractionAndRestore(Rotate(g, theta), 1.0 / Gamma(theta));
    }
    case AttackKind::kRotatePad:
      return Rotate(g, spec.Param("theta"));
    case AttackKind::kScaleCrop: {
      const double s = spec.Param("s");
      return CropCenter(Resize(g, Scaled(h, s), Scaled(w, s)), h, w);
    }
    case AttackKind::kScalePad: {
      const double s = spec.Param("s");
      return PadCenter(Resize(g, Scaled(h, s), Scaled(w, s)), h, w);
    }
    case AttackKind::kTranslateRowColRemove:
      return RemoveRowsCols(g, ToSize(spec.Param("nc")), ToSize(spec.Param("nr")),
                            spec.Param("seed"));
    case AttackKind::kCropPercent:
      return CropFractionAndRestore(g, std::sqrt(1.0 - spec.Param("p") / 100.0));
    case AttackKind::kShear: {
      const double sx = spec.Param("sx") / 100.0, sy = spec.Param("sy") / 100.0;
      if (sx == 0.0 && sy == 0.0) return g;
      // (row, col) coordinates: col += sx * row, row += sy * col.
      return WarpCropRestore(g, {1.0, sy, sx, 1.0});
    }
    case AttackKind::kGaussianNoise: {
      const double sigma = spec.Param("sigma");
      Grid2D out = g;
      if (sigma == 0.0) return out;
      Rng rng = SeededRng(spec.Param("seed"), "gaussian-noise", stream);
      for (double& v : out.values()) v += sigma * rng.Normal();
      return out;
    }
    case AttackKind::kGaussianBlur:
      return GaussianBlur(g, ToSize(spec.Param("k")));
    case AttackKind::kMedianFilter:
      return MedianFilter(g, ToSize(spec.Param("k")));
    case AttackKind::kBrightness: {
      Grid2D out = g;
      const double b = spec.Param("b");
      for (double& v : out.values()) v *= b;
      return out;
    }
    case AttackKind::kContrast: {
      Grid2D out = g;
      const double c = spec.Param("c");
      double mean = 0.0;
      for (double v : g.values()) mean += v;
      mean /= static_cast<double>(g.size());
      for (double& v : out.values()) v = mean + c * (v - mean);
      return out;
    }
    case AttackKind::kJpegProxy:
      return JpegProxy(g, static_cast<int>(spec.Param("q")), spec.Param("scale"));
    case AttackKind::kEraseRegion:
      return EraseRegion(g, spec.Param("frac"), spec.Param("seed"));
  }
  throw Error(ErrorCode::kContract, "unhandled attack kind");
}

Grid2D BlockUpsample(const Grid2D& g, std::size_t factor) {
  if (factor == 0) throw Error(ErrorCode::kConfig, "proxy scale must be >= 1");
  Grid2D out(g.height() * factor, g.width() * factor);
  for (std::size_t r = 0; r < out.height(); ++r)
    for (std::size_t c = 0; c < out.width(); ++c) out(r, c) = g(r / factor, c / factor);
  return out;
}

Grid2D BlockDownsample(const Grid2D& g, std::size_t factor) {
  if (factor == 0 || g.height() % factor != 0 || g.width() % factor != 0) {
    throw Error(ErrorCode::kShape, "grid is not a multiple of the proxy scale");
  }
  Grid2D out(g.height() / factor, g.width() / factor);
  const double inv = 1.0 / static_cast<double>(factor * factor);
  for (std::size_t r = 0; r < g.height(); ++r)
    for (std::size_t c = 0; c < g.width(); ++c) out(r / factor, c / factor) += g(r, c) * inv;
  return out;
}

LatentTensor ApplyPipeline(const AttackPipeline& pipeline, const LatentTensor& z,
                           std::size_t proxy_scale) {
  if (pipeline.empty()) return z;
  std::vector<Grid2D> planes;
  for (std::size_t ch = 0; ch < z.channels(); ++ch) {
    Grid2D g = proxy_scale > 1 ? BlockUpsample(z.channel(ch), proxy_scale) : z.channel(ch);
    for (const AttackSpec& spec : pipeline) g = ApplyAttack(spec, g, ch);
    planes.push_back(proxy_scale > 1 ? BlockDownsample(g, proxy_scale) : std::move(g));
  }
  return LatentTensor(std::move(planes));
}

std::optional<double> PipelineRotation(const AttackPipeline& pipeline) {
  std::optional<double> total;
  for (const AttackSpec& spec : pipeline) {
    if (spec.kind == AttackKind::kRotateCropRescale || spec.kind == AttackKind::kRotatePad) {
      total = total.value_or(0.0) + spec.Param("theta");
    }
  }
  return total;
}

std::vector<AttackPipeline> ParsePresetText(const std::string& text) {
  std::vector<AttackPipeline> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(ParsePipeline(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ", " + e.what());
    }
  }
  if (out.empty()) throw Error(ErrorCode::kParse, "preset holds no pipelines");
  return out;
}

std::vector<AttackPipeline> ResolveAttacks(const std::string& arg) {
  const bool inline_text = arg == "clean" || arg.find('(') != std::string::npos ||
                           arg.find('|') != std::string::npos;
  if (!inline_text) {
    const std::filesystem::path preset =
        std::filesystem::path(MAXSIVE_PRESET_DIR) / (arg + ".txt");
    if (arg.find('/') == std::string::npos && std::filesystem::exists(preset)) {
      return ParsePresetText(ReadTextFile(preset));
    }
    if (std::filesystem::is_regular_file(arg)) return ParsePresetText(ReadTextFile(arg));
  }
  return {ParsePipeline(arg)};
}

}  // namespace maxsive
