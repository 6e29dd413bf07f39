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

#include "maxsive/fourier.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "maxsive/error.h"

namespace maxsive {
namespace {

// FFTW planning is not thread-safe, execution is. Plans are created once per
// (shape, direction) under a lock and reused with the new-array interface on
// thread-local aligned buffers.
class PlanCache {
 public:
  static PlanCache& Instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan Get(int h, int w, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(h, w, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(h) * w);
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(h) * w);
    fftw_plan plan = fftw_plan_dft_2d(h, w, in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

struct AlignedBuffer {
  fftw_complex* data = nullptr;
  std::size_t capacity = 0;

  ~AlignedBuffer() { fftw_free(data); }

  fftw_complex* Reserve(std::size_t n) {
    if (n > capacity) {
      fftw_free(data);
      data = fftw_alloc_complex(n);
      capacity = n;
    }
    return data;
  }
};

ComplexGrid2D Transform(const ComplexGrid2D& g, int sign) {
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "empty grid");
  thread_local AlignedBuffer in_buf;
  thread_local AlignedBuffer out_buf;
  fftw_complex* in = in_buf.Reserve(n);
  fftw_complex* out = out_buf.Reserve(n);
  const auto src = g.values();
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = src[i].real();
    in[i][1] = src[i].imag();
  }
  fftw_plan plan = PlanCache::Instance().Get(static_cast<int>(g.height()),
                                             static_cast<int>(g.width()), sign);
  fftw_execute_dft(plan, in, out);
  ComplexGrid2D result(g.height(), g.width());
  auto dst = result.values();
  for (std::size_t i = 0; i < n; ++i) dst[i] = {out[i][0], out[i][1]};
  return result;
}

template <typename T>
BasicGrid<T> QuadrantSwap(const BasicGrid<T>& g) {
  const std::size_t h = g.height();
  const std::size_t w = g.width();
  if (h % 2 != 0 || w % 2 != 0) {
    throw Error(ErrorCode::kUnsupportedShape,
                "center shift needs even dimensions, got " + std::to_string(h) +
                    "x" + std::to_string(w));
  }
  BasicGrid<T> out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t rr = (r + h / 2) % h;
    for (std::size_t c = 0; c < w; ++c) {
      out(rr, (c + w / 2) % w) = g(r, c);
    }
  }
  return out;
}

}  // namespace

ComplexGrid2D Dft2(const Grid2D& g) {
  RequireFinite(g.values(), "dft2 input");
  ComplexGrid2D c(g.height(), g.width());
  for (std::size_t i = 0; i < g.size(); ++i) c.values()[i] = g.values()[i];
  return Transform(c, FFTW_FORWARD);
}

ComplexGrid2D Dft2Complex(const ComplexGrid2D& g) {
  RequireFinite(g.values(), "dft2 input");
  return Transform(g, FFTW_FORWARD);
}

ComplexGrid2D Idft2Complex(const ComplexGrid2D& g) {
  RequireFinite(g.values(), "idft2 input");
  ComplexGrid2D out = Transform(g, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& v : out.values()) v *= scale;
  return out;
}

Grid2D Idft2(const ComplexGrid2D& spectrum, double tolerance) {
  ComplexGrid2D c = Idft2Complex(spectrum);
  Grid2D out(c.height(), c.width());
  double max_real = 0.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.values()[i] = c.values()[i].real();
    max_real = std::max(max_real, std::abs(c.values()[i].real()));
    max_imag = std::max(max_imag, std::abs(c.values()[i].imag()));
  }
  if (max_imag > tolerance * std::max(1.0, max_real)) {
    throw Error(ErrorCode::kSymmetryViolation,
                "inverse DFT imaginary residue " + std::to_string(max_imag) +
                    " exceeds tolerance");
  }
  return out;
}

ComplexGrid2D CenterShift(const ComplexGrid2D& g) { return QuadrantSwap(g); }

// For even dimensions the half-size swap is its own inverse.
ComplexGrid2D UncenterShift(const ComplexGrid2D& g) { return QuadrantSwap(g); }

Grid2D CenterShift(const Grid2D& g) { return QuadrantSwap(g); }

Grid2D CenteredMagnitude(const Grid2D& g) {
  ComplexGrid2D spec = CenterShift(Dft2(g));
  Grid2D mag(spec.height(), spec.width());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    mag.values()[i] = std::abs(spec.values()[i]);
  }
  return mag;
}

}  // namespace maxsive
