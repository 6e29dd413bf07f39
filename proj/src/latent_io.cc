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

#include "maxsive/latent_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "maxsive/error.h"

namespace maxsive {
namespace {

static_assert(std::numeric_limits<float>::is_iec559, "float must be IEEE-754");

void PutU16(std::vector<std::uint8_t>& out, std::size_t offset, std::size_t v) {
  out[offset] = static_cast<std::uint8_t>(v & 0xff);
  out[offset + 1] = static_cast<std::uint8_t>((v >> 8) & 0xff);
}

std::size_t GetU16(const std::vector<std::uint8_t>& in, std::size_t offset) {
  return static_cast<std::size_t>(in[offset]) |
         static_cast<std::size_t>(in[offset + 1]) << 8;
}

}  // namespace

std::vector<std::uint8_t> EncodeMxlt(const LatentTensor& latent) {
  constexpr std::size_t kMax = std::numeric_limits<std::uint16_t>::max();
  if (latent.height() == 0 || latent.width() == 0 || latent.channels() == 0 ||
      latent.height() > kMax || latent.width() > kMax ||
      latent.channels() > kMax) {
    throw Error(ErrorCode::kShape, "latent dimensions do not fit MXLT header");
  }
  std::vector<std::uint8_t> out(kMxltHeaderSize + 4 * latent.size(), 0);
  std::memcpy(out.data(), "MXLT", 4);
  out[4] = 1;
  PutU16(out, 5, latent.height());
  PutU16(out, 7, latent.width());
  PutU16(out, 9, latent.channels());
  std::size_t pos = kMxltHeaderSize;
  for (const Grid2D& plane : latent.planes()) {
    for (double v : plane.values()) {
      const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      for (int i = 0; i < 4; ++i) out[pos++] = static_cast<std::uint8_t>(bits >> (8 * i));
    }
  }
  return out;
}

LatentTensor DecodeMxlt(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMxltHeaderSize || std::memcmp(bytes.data(), "MXLT", 4) != 0) {
    throw Error(ErrorCode::kIo, "not an MXLT file");
  }
  if (bytes[4] != 1) {
    throw Error(ErrorCode::kIo, "unsupported MXLT version " + std::to_string(bytes[4]));
  }
  const std::size_t h = GetU16(bytes, 5);
  const std::size_t w = GetU16(bytes, 7);
  const std::size_t c = GetU16(bytes, 9);
  if (h == 0 || w == 0 || c == 0) throw Error(ErrorCode::kIo, "MXLT has zero dimension");
  if (bytes.size() != kMxltHeaderSize + 4 * h * w * c) {
    throw Error(ErrorCode::kIo, "MXLT payload length does not match header");
  }
  LatentTensor out(h, w, c);
  std::size_t pos = kMxltHeaderSize;
  for (Grid2D& plane : out.planes()) {
    for (double& v : plane.values()) {
      std::uint32_t bits = 0;
      for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
      v = static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  return out;
}

void WriteMxlt(const std::filesystem::path& path, const LatentTensor& latent) {
  const std::vector<std::uint8_t> bytes = EncodeMxlt(latent);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

LatentTensor ReadMxlt(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return DecodeMxlt(bytes);
}

}  // namespace maxsive
