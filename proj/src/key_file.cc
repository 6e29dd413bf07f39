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

#include "maxsive/key_file.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "maxsive/error.h"

namespace maxsive {
namespace {

using nlohmann::json;

template <typename T>
T Field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(ErrorCode::kParse, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("field '") + name + "': " + e.what());
  }
}

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

}  // namespace

std::string KeyFileToJson(const KeyFile& key) {
  json j = {{"version", 1},
            {"master_seed", key.master_seed.ToHex()},
            {"f_hw", key.replication.f_hw},
            {"f_c", key.replication.f_c},
            {"h", key.shape.height},
            {"w", key.shape.width},
            {"c", key.shape.channels},
            {"kdf", "sha256-concat"},
            {"tiling", "cgm-rowmajor"}};
  return j.dump(2) + "\n";
}

KeyFile KeyFileFromJson(const std::string& text) {
  const json j = Parse(text);
  if (!j.is_object()) throw Error(ErrorCode::kParse, "key file must be a JSON object");
  if (Field<int>(j, "version") != 1) throw Error(ErrorCode::kParse, "unsupported key file version");
  if (Field<std::string>(j, "kdf") != "sha256-concat") {
    throw Error(ErrorCode::kParse, "unsupported kdf");
  }
  if (Field<std::string>(j, "tiling") != "cgm-rowmajor") {
    throw Error(ErrorCode::kParse, "unsupported tiling");
  }
  KeyFile key;
  key.master_seed = Seed256::FromHex(Field<std::string>(j, "master_seed"));
  key.replication = {Field<std::size_t>(j, "f_hw"), Field<std::size_t>(j, "f_c")};
  key.shape = {Field<std::size_t>(j, "h"), Field<std::size_t>(j, "w"),
               Field<std::size_t>(j, "c")};
  key.Layout();  // validates divisibility
  return key;
}

void WriteKeyFile(const std::filesystem::path& path, const KeyFile& key) {
  WriteTextFile(path, KeyFileToJson(key));
}

KeyFile ReadKeyFile(const std::filesystem::path& path) {
  return KeyFileFromJson(ReadTextFile(path));
}

std::string RegistryToJson(const std::vector<RegistryRecord>& records) {
  json j = json::array();
  for (const RegistryRecord& r : records) {
    j.push_back({{"user_id", r.user_id}, {"master_seed", r.master_seed.ToHex()}});
  }
  return j.dump(2) + "\n";
}

std::vector<RegistryRecord> RegistryFromJson(const std::string& text) {
  const json j = Parse(text);
  if (!j.is_array()) throw Error(ErrorCode::kParse, "registry must be a JSON array");
  std::vector<RegistryRecord> out;
  for (const json& e : j) {
    out.push_back({Field<std::uint64_t>(e, "user_id"),
                   Seed256::FromHex(Field<std::string>(e, "master_seed"))});
  }
  return out;
}

void WriteRegistryFile(const std::filesystem::path& path,
                       const std::vector<RegistryRecord>& records) {
  WriteTextFile(path, RegistryToJson(records));
}

std::vector<RegistryRecord> ReadRegistryFile(const std::filesystem::path& path) {
  return RegistryFromJson(ReadTextFile(path));
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace maxsive
