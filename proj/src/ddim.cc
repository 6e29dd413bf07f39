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

#include "maxsive/ddim.h"

#include <cmath>
#include <string>

#include "maxsive/error.h"
#include "maxsive/random.h"

namespace maxsive {
namespace {

void CheckTimestep(int t, const DdimSchedule& s) {
  if (t < 0 || t > s.steps) {
    throw Error(ErrorCode::kContract, "timestep " + std::to_string(t) +
                                          " outside schedule of " +
                                          std::to_string(s.steps) + " steps");
  }
}

// a * x + b * y, elementwise.
LatentTensor Combine(double a, const LatentTensor& x, double b,
                     const LatentTensor& y) {
  if (!x.SameShape(y)) throw Error(ErrorCode::kContract, "latent shapes differ");
  LatentTensor out(x.height(), x.width(), x.channels());
  for (std::size_t ch = 0; ch < x.channels(); ++ch) {
    auto xs = x.channel(ch).values();
    auto ys = y.channel(ch).values();
    auto os = out.channel(ch).values();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = a * xs[i] + b * ys[i];
  }
  return out;
}

LatentTensor CheckedPredict(const Denoiser& d, const LatentTensor& z, int t) {
  LatentTensor eps = d.Predict(z, t);
  if (!eps.SameShape(z)) {
    throw Error(ErrorCode::kContract, "denoiser " + d.Name() + " changed latent shape");
  }
  return eps;
}

}  // namespace

DdimSchedule MakeSchedule(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw Error(ErrorCode::kConfig, "ddim.steps must be >= 1");
  if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0)) {
    throw Error(ErrorCode::kConfig,
                "need 0 < beta_start <= beta_end < 1, got " +
                    std::to_string(beta_start) + ", " + std::to_string(beta_end));
  }
  DdimSchedule s;
  s.steps = steps;
  s.beta.assign(steps + 1, 0.0);
  s.alpha_bar.assign(steps + 1, 1.0);
  for (int t = 1; t <= steps; ++t) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(t - 1) / (steps - 1);
    s.beta[t] = beta_start + frac * (beta_end - beta_start);
    s.alpha_bar[t] = s.alpha_bar[t - 1] * (1.0 - s.beta[t]);
  }
  return s;
}

LatentTensor ZeroDenoiser::Predict(const LatentTensor& z, int) const {
  return LatentTensor(z.height(), z.width(), z.channels());
}

LatentTensor LinearDenoiser::Predict(const LatentTensor& z, int) const {
  return lambda_ * z;
}

LatentTensor SeededNoiseDenoiser::Predict(const LatentTensor& z, int t) const {
  Rng rng(DeriveSeed(Seed256::FromU64(seed_), "seeded-noise-denoiser",
                     static_cast<std::uint64_t>(t)));
  LatentTensor out(z.height(), z.width(), z.channels());
  for (Grid2D& plane : out.planes()) rng.FillNormal(plane.values(), sigma_);
  return out;
}

std::unique_ptr<Denoiser> MakeDenoiser(const std::string& kind, double param,
                                       std::uint64_t seed) {
  if (kind == "zero") return std::make_unique<ZeroDenoiser>();
  if (kind == "linear") return std::make_unique<LinearDenoiser>(param);
  if (kind == "seeded_noise") {
    if (!(param >= 0.0)) throw Error(ErrorCode::kConfig, "seeded_noise sigma must be >= 0");
    return std::make_unique<SeededNoiseDenoiser>(seed, param);
  }
  throw Error(ErrorCode::kConfig, "unknown denoiser '" + kind + "'");
}

LatentTensor PredictZ0(const LatentTensor& z_t, const LatentTensor& eps, int t,
                       const DdimSchedule& schedule) {
  CheckTimestep(t, schedule);
  const double ab = schedule.alpha_bar[t];
  return Combine(1.0 / std::sqrt(ab), z_t, -std::sqrt(1.0 - ab) / std::sqrt(ab), eps);
}

LatentTensor PredictZ0(const LatentTensor& z_t, int t, const Denoiser& denoiser,
                       const DdimSchedule& schedule) {
  return PredictZ0(z_t, CheckedPredict(denoiser, z_t, t), t, schedule);
}

LatentTensor Reverse(const LatentTensor& z_T, const Denoiser& denoiser,
                     const DdimSchedule& schedule, const InjectionHook& hook) {
  LatentTensor z = z_T;
  for (int t = schedule.steps; t >= 1; --t) {
    const LatentTensor eps = CheckedPredict(denoiser, z, t);
    LatentTensor z0 = PredictZ0(z, eps, t, schedule);
    if (hook) {
      LatentTensor injected = hook(z0, t);
      if (!injected.SameShape(z0)) {
        throw Error(ErrorCode::kContract, "injection hook changed latent shape");
      }
      z0 = std::move(injected);
    }
    const double ab_prev = schedule.alpha_bar[t - 1];
    z = Combine(std::sqrt(ab_prev), z0, std::sqrt(1.0 - ab_prev), eps);
  }
  return z;
}

LatentTensor Inverse(const LatentTensor& z_0, const Denoiser& denoiser,
                     const DdimSchedule& schedule) {
  LatentTensor z = z_0;
  for (int t = 0; t < schedule.steps; ++t) {
    const LatentTensor eps = CheckedPredict(denoiser, z, t + 1);
    const LatentTensor z0 = PredictZ0(z, eps, t, schedule);
    const double ab_next = schedule.alpha_bar[t + 1];
    z = Combine(std::sqrt(ab_next), z0, std::sqrt(1.0 - ab_next), eps);
  }
  return z;
}

}  // namespace maxsive
