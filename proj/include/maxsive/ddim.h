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

#ifndef MAXSIVE_DDIM_H_
#define MAXSIVE_DDIM_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "maxsive/grid.h"

namespace maxsive {

// Variance schedule indexed by timestep 0..T. beta[0] is 0 so that
// alpha_bar[0] == 1: the last reverse step lands on the clean prediction and
// the first inverse step starts from it.
struct DdimSchedule {
  int steps = 0;
  std::vector<double> beta;
  std::vector<double> alpha_bar;
};

// Linear beta_1..beta_T from beta_start to beta_end; alpha_bar_t is the
// running product of (1 - beta_i).
DdimSchedule MakeSchedule(int steps, double beta_start, double beta_end);

// Noise predictor eps(z_t, t). Implementations must be shape-preserving,
// deterministic and safe for concurrent const use.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual LatentTensor Predict(const LatentTensor& z, int t) const = 0;
  virtual std::string Name() const = 0;
};

class ZeroDenoiser final : public Denoiser {
 public:
  LatentTensor Predict(const LatentTensor& z, int t) const override;
  std::string Name() const override { return "zero"; }
};

class LinearDenoiser final : public Denoiser {
 public:
  explicit LinearDenoiser(double lambda) : lambda_(lambda) {}
  LatentTensor Predict(const LatentTensor& z, int t) const override;
  std::string Name() const override { return "linear"; }

 private:
  double lambda_;
};

// Pseudo-random field keyed by (seed, t) only; ignores the content of z.
class SeededNoiseDenoiser final : public Denoiser {
 public:
  SeededNoiseDenoiser(std::uint64_t seed, double sigma)
      : seed_(seed), sigma_(sigma) {}
  LatentTensor Predict(const LatentTensor& z, int t) const override;
  std::string Name() const override { return "seeded_noise"; }

 private:
  std::uint64_t seed_;
  double sigma_;
};

// kind is one of "zero", "linear", "seeded_noise"; param is lambda for
// linear and sigma for seeded_noise.
std::unique_ptr<Denoiser> MakeDenoiser(const std::string& kind, double param,
                                       std::uint64_t seed = 0);

// Replaces the predicted z0 at timestep t during reverse sampling.
using InjectionHook = std::function<LatentTensor(const LatentTensor& z0, int t)>;

// (z_t - sqrt(1 - abar_t) * eps) / sqrt(abar_t).
LatentTensor PredictZ0(const LatentTensor& z_t, const LatentTensor& eps,
                       int t, const DdimSchedule& schedule);
LatentTensor PredictZ0(const LatentTensor& z_t, int t, const Denoiser& denoiser,
                       const DdimSchedule& schedule);

// Deterministic reverse process z_T -> z_0. For t = T..1:
//   z0_t = PredictZ0(z_t); z0_t = hook(z0_t, t) if a hook is given;
//   z_{t-1} = sqrt(abar_{t-1}) z0_t + sqrt(1 - abar_{t-1}) eps.
LatentTensor Reverse(const LatentTensor& z_T, const Denoiser& denoiser,
                     const DdimSchedule& schedule,
                     const InjectionHook& hook = nullptr);

// Inverse process z_0 -> z_T. For t = 0..T-1 the noise estimate is taken at
// the current iterate z_t, conditioned on the destination timestep t+1 (the
// step that the reverse process took in the other direction):
//   z_{t+1} = sqrt(abar_{t+1}) z0_t + sqrt(1 - abar_{t+1}) eps.
LatentTensor Inverse(const LatentTensor& z_0, const Denoiser& denoiser,
                     const DdimSchedule& schedule);

}  // namespace maxsive

#endif  // MAXSIVE_DDIM_H_
