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

#ifndef SEMFIELD_BENCH_CONFIG_HPP_
#define SEMFIELD_BENCH_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semfield/bench/dataset.hpp"
#include "semfield/bench/env.hpp"
#include "semfield/bench/toy.hpp"
#include "semfield/policy/denoiser.hpp"

namespace semfield::bench {

struct TrainConfig {
  int steps = 3000;
  int batch = 8;
  double lr = 2e-3;
  std::uint64_t seed = 7;
  int log_every = 50;

  void validate() const;
};

struct EvalConfig {
  int episodes_per_seed = 100;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int replan_every = 4;
  bool deterministic = true;

  void validate() const;
};

// Everything one run needs: the task, how observations are built, the model
// shape, and the training/evaluation protocol. The canonical JSON form is
// hashed to pair datasets, checkpoints, and reports with the settings that
// produced them.
struct BenchConfig {
  TaskSpec task;
  ObservationConfig observation;
  policy::PolicyConfig policy;
  TrainConfig train;
  EvalConfig eval;
  Toggles toggles;

  void validate() const;
  std::string to_json() const;
  std::string config_hash() const;
  // Hash over the task and observation sections only; datasets are paired
  // with this one, so training knobs can change without regenerating data.
  std::string data_hash() const;
};

// Desk-scale defaults for the arrow-alignment task.
BenchConfig default_bench_config();

// Parses a JSON config. Every key is optional and falls back to the
// default; unknown keys are rejected. A missing or unreadable file is a
// persistence error; malformed or invalid content is a config error.
BenchConfig parse_bench_config(const std::string& text);
BenchConfig load_bench_config(const std::filesystem::path& path);

}  // namespace semfield::bench

#endif  // SEMFIELD_BENCH_CONFIG_HPP_
