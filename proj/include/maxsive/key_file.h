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

#ifndef MAXSIVE_KEY_FILE_H_
#define MAXSIVE_KEY_FILE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "maxsive/codec.h"
#include "maxsive/random.h"

namespace maxsive {

// "mxkey v1" JSON key file:
//   {"version":1, "master_seed":"<64 hex>", "f_hw":2, "f_c":1,
//    "h":64, "w":64, "c":4, "kdf":"sha256-concat", "tiling":"cgm-rowmajor"}
struct KeyFile {
  Seed256 master_seed;
  ReplicationConfig replication;
  LatentShape shape;

  CodecLayout Layout() const { return CodecLayout(shape, replication); }
};

std::string KeyFileToJson(const KeyFile& key);
KeyFile KeyFileFromJson(const std::string& text);
void WriteKeyFile(const std::filesystem::path& path, const KeyFile& key);
KeyFile ReadKeyFile(const std::filesystem::path& path);

// Registry file: JSON array of {"user_id": <u64>, "master_seed": "<64 hex>"}.
struct RegistryRecord {
  std::uint64_t user_id = 0;
  Seed256 master_seed;
};

std::string RegistryToJson(const std::vector<RegistryRecord>& records);
std::vector<RegistryRecord> RegistryFromJson(const std::string& text);
void WriteRegistryFile(const std::filesystem::path& path,
                       const std::vector<RegistryRecord>& records);
std::vector<RegistryRecord> ReadRegistryFile(const std::filesystem::path& path);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace maxsive

#endif  // MAXSIVE_KEY_FILE_H_
