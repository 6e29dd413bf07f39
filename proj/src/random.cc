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

#include "maxsive/random.h"

#include <openssl/evp.h>

#include <cmath>
#include <numbers>

#include "maxsive/error.h"

namespace maxsive {
namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void AppendU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::seed_seq MakeSeedSeq(const Digest256& d, std::vector<std::uint32_t>& words) {
  words.clear();
  for (std::size_t i = 0; i < d.size(); i += 4) {
    words.push_back(static_cast<std::uint32_t>(d[i]) |
                    static_cast<std::uint32_t>(d[i + 1]) << 8 |
                    static_cast<std::uint32_t>(d[i + 2]) << 16 |
                    static_cast<std::uint32_t>(d[i + 3]) << 24);
  }
  return std::seed_seq(words.begin(), words.end());
}

}  // namespace

Digest256 Sha256(std::span<const std::uint8_t> bytes) {
  Digest256 out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error(ErrorCode::kInvalidInput, "sha256 failed");
  }
  return out;
}

Seed256 Seed256::FromHex(std::string_view hex) {
  if (hex.size() != 64) {
    throw Error(ErrorCode::kInvalidInput,
                "master seed must be 64 hex characters, got " +
                    std::to_string(hex.size()));
  }
  Seed256 s;
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = HexValue(hex[2 * i]);
    const int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kInvalidInput, "master seed has non-hex characters");
    }
    s.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return s;
}

Seed256 Seed256::FromU64(std::uint64_t value) {
  std::vector<std::uint8_t> buf;
  constexpr std::string_view kTag = "maxsive-seed";
  buf.insert(buf.end(), kTag.begin(), kTag.end());
  AppendU64(buf, value);
  return Seed256{Sha256(buf)};
}

std::string Seed256::ToHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Seed256 DeriveSeed(const Seed256& seed, std::string_view purpose,
                   std::uint64_t index) {
  std::vector<std::uint8_t> buf(seed.bytes.begin(), seed.bytes.end());
  buf.insert(buf.end(), purpose.begin(), purpose.end());
  AppendU64(buf, index);
  return Seed256{Sha256(buf)};
}

Rng::Rng(const Seed256& seed) {
  std::vector<std::uint32_t> words;
  std::seed_seq seq = MakeSeedSeq(seed.bytes, words);
  engine_.seed(seq);
}

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::Below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidInput, "Below(0)");
  // 2^64 mod bound; draws below it would over-represent small residues.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return x % bound;
}

double Rng::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = Uniform();
  } while (u1 <= 0.0);
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

void Rng::FillNormal(std::span<double> out, double sigma) {
  for (double& v : out) v = sigma * Normal();
}

}  // namespace maxsive
