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

#ifndef SEMFIELD_ERRORS_HPP_
#define SEMFIELD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace semfield {

// Point with non-positive depth in the camera frame. Carries the index of
// the offending point when projecting a whole cloud, -1 otherwise.
class BehindCameraError : public std::runtime_error {
 public:
  explicit BehindCameraError(const std::string& msg, int point_index = -1)
      : std::runtime_error(msg), point_index_(point_index) {}
  int point_index() const { return point_index_; }

 private:
  int point_index_;
};

// Malformed or missing external data (feature files, datasets).
class IngestionError : public std::runtime_error {
 public:
  explicit IngestionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure writing or reading artifacts on disk.
class PersistenceError : public std::runtime_error {
 public:
  explicit PersistenceError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Invalid or inconsistent configuration, including checkpoint/config
// shape mismatches discovered at load time.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace semfield

#endif  // SEMFIELD_ERRORS_HPP_
