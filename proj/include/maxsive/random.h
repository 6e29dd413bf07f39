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

#ifndef MAXSIVE_RANDOM_H_
#define MAXSIVE_RANDOM_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maxsive {

using Digest256 = std::array<std::uint8_t, 32>;

Digest256 Sha256(std::span<const std::uint8_t> bytes);

// 256-bit master seed. Text form is 64 lowercase hex characters.
struct Seed256 {
  Digest256 bytes{};

  static Seed256 FromHex(std::string_view hex);
  // Deterministic expansion of a small integer seed: SHA-256("maxsive-seed" ||
  // u64le(value)).
  static Seed256 FromU64(std::uint64_t value);
  std::string ToHex() const;

  friend auto operator<=>(const Seed256&, const Seed256&) = default;
};

// SHA-256(seed || purpose || u64le(index)). Streams with different purposes
// or indices are independent.
Seed256 DeriveSeed(const Seed256& seed, std::string_view purpose,
                   std::uint64_t index);

// Deterministic generator. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; uniform, bounded and normal draws are
// implemented here rather than with <random> distributions so results are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(const Seed256& seed);
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, bound) without modulo bias.
  std::uint64_t Below(std::uint64_t bound);
  // Standard normal via Box-Muller; draws are produced in pairs.
  double Normal();
  void FillNormal(std::span<double> out, double sigma = 1.0);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// In-place Fisher-Yates: for i = n-1 down to 1, swap v[i] with v[Below(i+1)].
template <typename T>
void FisherYatesShuffle(std::span<T> v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.Below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace maxsive

#endif  // MAXSIVE_RANDOM_H_
