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

#ifndef MAXSIVE_LATENT_IO_H_
#define MAXSIVE_LATENT_IO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "maxsive/grid.h"

namespace maxsive {

// "MXLT v1" latent file:
//   offset 0   4 bytes  magic "MXLT"
//   offset 4   u8       version = 1
//   offset 5   u16 LE   h
//   offset 7   u16 LE   w
//   offset 9   u16 LE   c
//   offset 11  5 bytes  zero padding
// followed by c planes of h*w IEEE-754 float32 LE values, row-major.
inline constexpr std::size_t kMxltHeaderSize = 16;

std::vector<std::uint8_t> EncodeMxlt(const LatentTensor& latent);
LatentTensor DecodeMxlt(const std::vector<std::uint8_t>& bytes);

void WriteMxlt(const std::filesystem::path& path, const LatentTensor& latent);
LatentTensor ReadMxlt(const std::filesystem::path& path);

}  // namespace maxsive

#endif  // MAXSIVE_LATENT_IO_H_
