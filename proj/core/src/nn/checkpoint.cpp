// Copyright 2026 The Semfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semfield/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "semfield/errors.hpp"

namespace semfield::nn {
namespace {

constexpr char kMagic[8] = {'S', 'F', 'C', 'K', 'P', 'T', '0', '1'};

nlohmann::json read_manifest(std::ifstream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw PersistenceError("not a checkpoint archive: " + path);
  }
  std::uint64_t manifest_len = 0;
  in.read(reinterpret_cast<char*>(&manifest_len), sizeof(manifest_len));
  if (!in || manifest_len == 0 || manifest_len > (1ull << 30)) {
    throw PersistenceError("corrupt manifest length: " + path);
  }
  std::string text(manifest_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(manifest_len));
  if (!in) throw PersistenceError("truncated manifest: " + path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PersistenceError("malformed manifest in " + path + ": " + e.what());
  }
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<Param*>& params,
                     const std::string& config_hash) {
  nlohmann::json manifest;
  manifest["config_hash"] = config_hash;
  nlohmann::json list = nlohmann::json::array();
  for (const Param* p : params) {
    list.push_back({{"name", p->name},
                    {"rows", p->value.rows()},
                    {"cols", p->value.cols()}});
  }
  manifest["params"] = std::move(list);
  const std::string text = manifest.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw PersistenceError("cannot open for writing: " + path);
  out.write(kMagic, 8);
  const std::uint64_t manifest_len = text.size();
  out.write(reinterpret_cast<const char*>(&manifest_len),
            sizeof(manifest_len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Param* p : params) {
    for (Eigen::Index r = 0; r < p->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p->value.cols(); ++c) {
        const double x = p->value(r, c);
        out.write(reinterpret_cast<const char*>(&x), sizeof(double));
      }
    }
  }
  if (!out) throw PersistenceError("write failed: " + path);
}

void load_checkpoint(const std::string& path,
                     const std::vector<Param*>& params,
                     const std::string& expected_config_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open: " + path);
  const nlohmann::json manifest = read_manifest(in, path);

  const std::string stored_hash =
      manifest.value("config_hash", std::string());
  if (!expected_config_hash.empty() && stored_hash != expected_config_hash) {
    throw ConfigError("checkpoint " + path + " was trained under config " +
                      stored_hash + ", expected " + expected_config_hash);
  }
  const auto& list = manifest.at("params");
  if (list.size() != params.size()) {
    throw ConfigError("checkpoint " + path + " holds " +
                      std::to_string(list.size()) + " tensors, expected " +
                      std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& entry = list.at(i);
    const auto name = entry.at("name").get<std::string>();
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    if (name != params[i]->name || rows != params[i]->value.rows() ||
        cols != params[i]->value.cols()) {
      throw ConfigError("checkpoint tensor " + name + " does not match " +
                        params[i]->name);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        double x = 0;
        in.read(reinterpret_cast<char*>(&x), sizeof(double));
        params[i]->value(r, c) = x;
      }
    }
  }
  if (!in) throw PersistenceError("truncated payload: " + path);
}

std::string checkpoint_config_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open: " + path);
  return read_manifest(in, path).value("config_hash", std::string());
}

}  // namespace semfield::nn
