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

#ifndef MAXSIVE_GRID_H_
#define MAXSIVE_GRID_H_

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace maxsive {

// Dense row-major 2-D grid. Cell (r, c) lives at index r * width + c.
template <typename T>
class BasicGrid {
 public:
  BasicGrid() = default;
  BasicGrid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), values_(height * width, fill) {}
  BasicGrid(std::size_t height, std::size_t width, std::vector<T> values);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return values_[r * width_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return values_[r * width_ + c];
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  std::vector<T>& storage() { return values_; }

  bool SameShape(const BasicGrid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const BasicGrid&, const BasicGrid&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> values_;
};

using Grid2D = BasicGrid<double>;
using ComplexGrid2D = BasicGrid<std::complex<double>>;

// h x w x c latent; one Grid2D plane per channel.
class LatentTensor {
 public:
  LatentTensor() = default;
  LatentTensor(std::size_t height, std::size_t width, std::size_t channels,
               double fill = 0.0);
  explicit LatentTensor(std::vector<Grid2D> planes);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return planes_.size(); }
  std::size_t size() const { return height_ * width_ * planes_.size(); }

  Grid2D& channel(std::size_t i) { return planes_[i]; }
  const Grid2D& channel(std::size_t i) const { return planes_[i]; }
  std::vector<Grid2D>& planes() { return planes_; }
  const std::vector<Grid2D>& planes() const { return planes_; }

  double& at(std::size_t ch, std::size_t r, std::size_t c) {
    return planes_[ch](r, c);
  }
  double at(std::size_t ch, std::size_t r, std::size_t c) const {
    return planes_[ch](r, c);
  }

  bool SameShape(const LatentTensor& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels() == other.channels();
  }

  // Channel-major flattening (channel, row, col).
  std::vector<double> Flatten() const;
  static LatentTensor FromFlat(std::size_t height, std::size_t width,
                               std::size_t channels,
                               std::span<const double> values);

  LatentTensor& operator+=(const LatentTensor& other);
  LatentTensor& operator*=(double s);

  friend bool operator==(const LatentTensor&, const LatentTensor&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<Grid2D> planes_;
};

LatentTensor operator+(LatentTensor a, const LatentTensor& b);
LatentTensor operator*(double s, LatentTensor a);

// Applies fn(const Grid2D&) -> Grid2D to every channel.
template <typename F>
LatentTensor MapChannels(const LatentTensor& z, F&& fn) {
  std::vector<Grid2D> planes;
  planes.reserve(z.channels());
  for (const Grid2D& plane : z.planes()) planes.push_back(fn(plane));
  return LatentTensor(std::move(planes));
}

// Largest absolute elementwise difference; shapes must match.
double MaxAbsDiff(const Grid2D& a, const Grid2D& b);
double MaxAbsDiff(const LatentTensor& a, const LatentTensor& b);

// Throws kInvalidInput when any value is NaN or infinite.
void RequireFinite(std::span<const double> values, const char* what);
void RequireFinite(std::span<const std::complex<double>> values,
                   const char* what);

}  // namespace maxsive

#endif  // MAXSIVE_GRID_H_
