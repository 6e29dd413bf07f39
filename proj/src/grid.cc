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

#include "maxsive/grid.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxsive/error.h"

namespace maxsive {

template <typename T>
BasicGrid<T>::BasicGrid(std::size_t height, std::size_t width,
                        std::vector<T> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (values_.size() != height_ * width_) {
    throw Error(ErrorCode::kShape,
                "grid of " + std::to_string(height_) + "x" +
                    std::to_string(width_) + " given " +
                    std::to_string(values_.size()) + " values");
  }
}

template class BasicGrid<double>;
template class BasicGrid<std::complex<double>>;

LatentTensor::LatentTensor(std::size_t height, std::size_t width,
                           std::size_t channels, double fill)
    : height_(height),
      width_(width),
      planes_(channels, Grid2D(height, width, fill)) {}

LatentTensor::LatentTensor(std::vector<Grid2D> planes)
    : planes_(std::move(planes)) {
  if (planes_.empty()) return;
  height_ = planes_.front().height();
  width_ = planes_.front().width();
  for (const Grid2D& p : planes_) {
    if (p.height() != height_ || p.width() != width_) {
      throw Error(ErrorCode::kShape, "latent channels differ in shape");
    }
  }
}

std::vector<double> LatentTensor::Flatten() const {
  std::vector<double> out;
  out.reserve(size());
  for (const Grid2D& p : planes_) {
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  return out;
}

LatentTensor LatentTensor::FromFlat(std::size_t height, std::size_t width,
                                    std::size_t channels,
                                    std::span<const double> values) {
  if (values.size() != height * width * channels) {
    throw Error(ErrorCode::kShape, "flat latent has wrong length");
  }
  LatentTensor out(height, width, channels);
  const std::size_t plane = height * width;
  for (std::size_t ch = 0; ch < channels; ++ch) {
    std::copy_n(values.begin() + ch * plane, plane,
                out.channel(ch).values().begin());
  }
  return out;
}

LatentTensor& LatentTensor::operator+=(const LatentTensor& other) {
  if (!SameShape(other)) {
    throw Error(ErrorCode::kShape, "latent shapes differ in addition");
  }
  for (std::size_t ch = 0; ch < channels(); ++ch) {
    auto dst = planes_[ch].values();
    auto src = other.planes_[ch].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  return *this;
}

LatentTensor& LatentTensor::operator*=(double s) {
  for (Grid2D& p : planes_) {
    for (double& v : p.values()) v *= s;
  }
  return *this;
}

LatentTensor operator+(LatentTensor a, const LatentTensor& b) {
  a += b;
  return a;
}

LatentTensor operator*(double s, LatentTensor a) {
  a *= s;
  return a;
}

double MaxAbsDiff(const Grid2D& a, const Grid2D& b) {
  if (!a.SameShape(b)) throw Error(ErrorCode::kShape, "grid shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

double MaxAbsDiff(const LatentTensor& a, const LatentTensor& b) {
  if (!a.SameShape(b)) throw Error(ErrorCode::kShape, "latent shapes differ");
  double m = 0.0;
  for (std::size_t ch = 0; ch < a.channels(); ++ch) {
    m = std::max(m, MaxAbsDiff(a.channel(ch), b.channel(ch)));
  }
  return m;
}

void RequireFinite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string(what) + " contains a non-finite value");
    }
  }
}

void RequireFinite(std::span<const std::complex<double>> values,
                   const char* what) {
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorCode::kInvalidInput,
                  std::string(what) + " contains a non-finite value");
    }
  }
}

}  // namespace maxsive
