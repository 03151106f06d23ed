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

#ifndef SEMFIELD_NN_CHECKPOINT_HPP_
#define SEMFIELD_NN_CHECKPOINT_HPP_

#include <string>
#include <vector>

#include "semfield/nn/tape.hpp"

namespace semfield::nn {

// Archive layout: 8-byte magic "SFCKPT01", little-endian u64 manifest
// length, manifest JSON {"config_hash", "params": [{"name", "rows",
// "cols"}...]}, then every parameter's raw float64 values row-major in
// manifest order.
void save_checkpoint(const std::string& path,
                     const std::vector<Param*>& params,
                     const std::string& config_hash);

// Restores values into `params`, which must match the manifest in count,
// order, name, and shape; a non-empty expected hash must equal the stored
// one. Mismatches raise ConfigError, I/O trouble PersistenceError.
void load_checkpoint(const std::string& path,
                     const std::vector<Param*>& params,
                     const std::string& expected_config_hash = "");

// Reads just the stored config hash.
std::string checkpoint_config_hash(const std::string& path);

}  // namespace semfield::nn

#endif  // SEMFIELD_NN_CHECKPOINT_HPP_
